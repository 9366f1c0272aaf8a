#include "valkey/error.hpp"

namespace valkey {

const char* errc_name(errc c) {
  switch (c) {
    case errc::mode_mismatch: return "MODE_MISMATCH";
    case errc::empty_input: return "EMPTY_INPUT";
    case errc::zero_input: return "ZERO_INPUT";
    case errc::not_in_group: return "NOT_IN_GROUP";
    case errc::not_representable: return "NOT_REPRESENTABLE";
    case errc::inadmissible_data: return "INADMISSIBLE_DATA";
    case errc::zero_divisor: return "ZERO_DIVISOR";
    case errc::value_mismatch: return "VALUE_MISMATCH";
    case errc::depth_exceeded: return "DEPTH_EXCEEDED";
    case errc::cap_exceeded: return "CAP_EXCEEDED";
    case errc::kernel_hit: return "KERNEL_HIT";
    case errc::out_of_range: return "OUT_OF_RANGE";
    case errc::parse_error: return "PARSE_ERROR";
    case errc::unsupported: return "UNSUPPORTED";
    case errc::internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

}  // namespace valkey
