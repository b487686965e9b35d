#pragma once

#include <string>

#include "horolab/dynamics.hpp"
#include "horolab/trace_lab.hpp"

namespace horolab {

inline constexpr const char* kCorrelationHeader = "t,re_C,im_C,abs_C,stderr,N,seed";
inline constexpr const char* kTraceHeader = "t,re_trace,im_trace,abs_trace,J,stderr_total";

// CSV text with 17 significant digits per float.
std::string format_series(const CorrelationSeries& s);
std::string format_series(const TraceSeries& s);

CorrelationSeries parse_correlation_csv(const std::string& text);
TraceSeries parse_trace_csv(const std::string& text);

// Writes text to path. An existing file is an error unless force is set.
void write_text_file(const std::string& path, const std::string& text, bool force);
std::string read_text_file(const std::string& path);

void write_series(const std::string& path, const CorrelationSeries& s, bool force = false);
void write_series(const std::string& path, const TraceSeries& s, bool force = false);

}  // namespace horolab
