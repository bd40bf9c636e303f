#pragma once

#include "dmdkit/dmd.hpp"
#include "dmdkit/metrics.hpp"

#include <filesystem>
#include <iosfwd>

namespace dmdkit::app {

/// One row per mode sorted by participation: eigenvalue, frequency, growth,
/// amplitude, participation and share, then |phi| per channel.
void write_modes_csv(std::ostream& out, const DmdModel& model);
/// Re/Im of lambda and omega per mode, in model order.
void write_spectrum_csv(std::ostream& out, const DmdModel& model);
/// Long format (group, channel, magnitude) for the most participating modes,
/// conjugate pairs counted once.
void write_components_csv(std::ostream& out, const DmdModel& model, Index top_k);

/// Per forecast step: horizon in seconds and reference periods, step and
/// cumulative channel-averaged NMSE.
void write_error_trace_csv(std::ostream& out, const ErrorReport& report, double reference_period);

/// Long format plot table: time, periods, channel, value, series.
void write_series_long(std::ostream& out, const TimeSeriesFrame& frame, const std::string& series,
                       double reference_period);

/// Writes text to a file, replacing it; throws ValidationError on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace dmdkit::app
