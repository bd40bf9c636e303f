#include "dmdkit/app/pipeline.hpp"

#include "dmdkit/csv.hpp"
#include "dmdkit/error.hpp"
#include "dmdkit/synthetic.hpp"

namespace dmdkit::app {
namespace {

TimeSeriesFrame load_source(RunConfig& c) {
  if (c.preset) {
    if (c.dt) throw ValidationError("'dt' only applies to CSV input");
    if (c.time_column) throw ValidationError("'time_column' only applies to CSV input");
    Preset p = preset_by_name(*c.preset);
    if (c.seed) p.spec.seed = *c.seed;
    if (c.nonlinearity) p.spec.nonlinearity = *c.nonlinearity;
    if (c.noise) p.spec.noise_std = *c.noise;
    c.seed = p.spec.seed;
    c.nonlinearity = p.spec.nonlinearity;
    c.noise = p.spec.noise_std;
    if (!c.train_len && !c.test_len) {
      c.train_len = p.train_len;
      c.test_len = p.test_len;
    }
    if (!c.reference_period) c.reference_period = p.reference_period;
    TimeSeriesFrame frame = gen_surrogate(p.spec);
    return c.columns.empty() ? frame : frame.select_channels(c.columns);
  }
  CsvSelection sel;
  sel.columns = c.columns;
  sel.time_column = c.time_column;
  sel.dt = c.dt;
  return load_csv(*c.input, sel);
}

}  // namespace

StandardizationParams identity_standardization(const std::vector<std::string>& channels) {
  StandardizationParams p;
  p.channels = channels;
  p.mean = Eigen::VectorXd::Zero(static_cast<Index>(channels.size()));
  p.std = Eigen::VectorXd::Ones(static_cast<Index>(channels.size()));
  return p;
}

PreparedData prepare_data(const RunConfig& config, const std::optional<StandardizationParams>& fixed) {
  validate_config(config);
  RunConfig c = config;
  TimeSeriesFrame raw = load_source(c);
  const Index m = raw.samples();

  if (c.train_len && *c.train_len >= m) {
    throw ValidationError("'train_len' (" + std::to_string(*c.train_len) + ") leaves no test samples in the " +
                          std::to_string(m) + "-sample record");
  }
  if (c.test_len && *c.test_len >= m) {
    throw ValidationError("'test_len' (" + std::to_string(*c.test_len) + ") leaves no training samples in the " +
                          std::to_string(m) + "-sample record");
  }
  if (!c.train_len && !c.test_len) c.train_len = m / 2;
  if (!c.train_len) c.train_len = m - *c.test_len;
  if (!c.test_len) c.test_len = m - *c.train_len;
  if (!c.reference_period) c.reference_period = 1.0;
  if (*c.train_len < 3) throw ValidationError("'train_len' must be at least 3, got " + std::to_string(*c.train_len));
  if (*c.test_len < 1) throw ValidationError("'test_len' must be at least 1, got " + std::to_string(*c.test_len));
  if (*c.train_len + *c.test_len > m) {
    throw ValidationError("'train_len' (" + std::to_string(*c.train_len) + ") + 'test_len' (" +
                          std::to_string(*c.test_len) + ") exceeds the " + std::to_string(m) + " samples of the record");
  }

  // derivatives of the whole record, before the split
  TimeSeriesFrame augmented = augment_derivatives(raw, AugmentationSpec{c.derivative_order, 4});

  std::optional<TimeSeriesFrame> centred;
  StandardizationParams params = [&] {
    if (fixed) return *fixed;
    if (c.standardize == "none") return identity_standardization(augmented.channel_names());
    if (c.standardize == "train") return fit_standardization(augmented.slice_rows(0, *c.train_len));
    auto [frame, p] = standardize(augmented);
    centred = std::move(frame);
    return p;
  }();
  if (params.channels != augmented.channel_names()) {
    throw ValidationError("model/data channel mismatch after derivative augmentation");
  }
  TimeSeriesFrame standardized = centred ? std::move(*centred) : apply_standardization(augmented, params);
  auto [train, test] = split_train_test(standardized, SplitSpec{*c.train_len, *c.test_len});

  return PreparedData{c,
                      raw.channel_names(),
                      std::move(raw),
                      std::move(augmented),
                      std::move(params),
                      std::move(standardized),
                      std::move(train),
                      std::move(test),
                      *c.reference_period};
}

}  // namespace dmdkit::app
