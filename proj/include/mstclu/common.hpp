#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mstclu {

inline constexpr const char* kVersion = "0.1.0";

// Error hierarchy. The CLI maps these onto exit codes:
// parameter_error -> 2, data_error -> 3, sketch_failure -> 4.
struct parameter_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct degenerate_edge_error : parameter_error {
  using parameter_error::parameter_error;
};

struct range_error : parameter_error {
  using parameter_error::parameter_error;
};

struct weight_range_error : data_error {
  using data_error::data_error;
};

struct parse_error : data_error {
  parse_error(const std::string& msg, std::size_t line)
      : data_error("line " + std::to_string(line) + ": " + msg), line_number(line) {}
  std::size_t line_number;
};

struct incompatible_sketch_error : data_error {
  using data_error::data_error;
};

struct invalid_cut_error : parameter_error {
  using parameter_error::parameter_error;
};

struct invalid_partition_error : data_error {
  using data_error::data_error;
};

struct undefined_metric_error : data_error {
  using data_error::data_error;
};

struct degenerate_dataset_error : data_error {
  using data_error::data_error;
};

using NodeId = std::uint32_t;

}  // namespace mstclu
