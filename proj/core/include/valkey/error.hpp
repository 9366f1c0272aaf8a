#ifndef VALKEY_ERROR_HPP
#define VALKEY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace valkey {

enum class errc {
  mode_mismatch,
  empty_input,
  zero_input,
  not_in_group,
  not_representable,
  inadmissible_data,
  zero_divisor,
  value_mismatch,
  depth_exceeded,
  cap_exceeded,
  kernel_hit,
  out_of_range,
  parse_error,
  unsupported,
  internal,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace valkey

#endif
