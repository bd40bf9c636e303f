#include "dmdkit/app/reports.hpp"

#include "dmdkit/csv.hpp"
#include "dmdkit/error.hpp"

#include <fstream>
#include <ostream>

namespace dmdkit::app {

void write_modes_csv(std::ostream& out, const DmdModel& model) {
  const auto rows = modal_table(model);
  double total = 0.0;
  for (const auto& r : rows) total += r.participation;
  out << "rank,mode,lambda_re,lambda_im,lambda_abs,omega_re,omega_im,frequency_hz,growth_rate,"
         "amplitude_re,amplitude_im,amplitude_abs,participation,participation_share";
  for (const auto& name : model.channel_names) out << ",mag_" << name;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << i + 1 << ',' << r.mode << ',' << format_double(r.lambda.real()) << ',' << format_double(r.lambda.imag())
        << ',' << format_double(std::abs(r.lambda)) << ',' << format_double(r.omega.real()) << ','
        << format_double(r.omega.imag()) << ',' << format_double(r.frequency_hz) << ','
        << format_double(r.growth_rate) << ',' << format_double(r.amplitude.real()) << ','
        << format_double(r.amplitude.imag()) << ',' << format_double(std::abs(r.amplitude)) << ','
        << format_double(r.participation) << ',' << format_double(total > 0.0 ? r.participation / total : 0.0);
    for (Index c = 0; c < r.magnitudes.size(); ++c) out << ',' << format_double(r.magnitudes(c));
    out << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const DmdModel& model) {
  out << "mode,lambda_re,lambda_im,omega_re,omega_im\n";
  for (Index j = 0; j < model.modes(); ++j) {
    out << j << ',' << format_double(model.lambdas(j).real()) << ',' << format_double(model.lambdas(j).imag()) << ','
        << format_double(model.omegas(j).real()) << ',' << format_double(model.omegas(j).imag()) << '\n';
  }
}

void write_components_csv(std::ostream& out, const DmdModel& model, Index top_k) {
  const auto groups = mode_components(model, std::min(top_k, model.modes()));
  out << "group,members,lambda_re,lambda_im,frequency_hz,participation,channel,magnitude\n";
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& grp = groups[g];
    std::string members;
    for (Index m : grp.members) members += (members.empty() ? "" : " ") + std::to_string(m);
    for (std::size_t c = 0; c < model.channel_names.size(); ++c) {
      out << g + 1 << ',' << members << ',' << format_double(grp.lambda.real()) << ','
          << format_double(grp.lambda.imag()) << ',' << format_double(grp.frequency_hz) << ','
          << format_double(grp.participation) << ',' << model.channel_names[c] << ','
          << format_double(grp.magnitudes(static_cast<Index>(c))) << '\n';
    }
  }
}

void write_error_trace_csv(std::ostream& out, const ErrorReport& report, double reference_period) {
  const Eigen::VectorXd periods = normalize_time(report.horizon, reference_period);
  out << "step,horizon_s,horizon_periods,step_nmse,cumulative_nmse\n";
  for (Index i = 0; i < report.horizon.size(); ++i) {
    out << i + 1 << ',' << format_double(report.horizon(i)) << ',' << format_double(periods(i)) << ','
        << format_double(report.per_step(i)) << ',' << format_double(report.cumulative(i)) << '\n';
  }
}

void write_series_long(std::ostream& out, const TimeSeriesFrame& frame, const std::string& series,
                       double reference_period) {
  const Eigen::VectorXd t = time_axis(frame);
  const Eigen::VectorXd periods = normalize_time(t, reference_period);
  for (Index r = 0; r < frame.samples(); ++r) {
    for (Index c = 0; c < frame.channels(); ++c) {
      out << format_double(t(r)) << ',' << format_double(periods(r)) << ','
          << frame.channel_names()[static_cast<std::size_t>(c)] << ',' << format_double(frame.values()(r, c)) << ','
          << series << '\n';
    }
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace dmdkit::app
