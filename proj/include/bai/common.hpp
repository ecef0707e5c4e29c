#pragma once
#include <stdexcept>
#include <string>

namespace bai {

enum class errc {
  infeasible_target,
  bad_side,
  bad_support,
  no_tail_mass,
  not_converged,
  target_above_range,
  no_gap,
  too_large,
  batch_too_small,
  gamma_too_small,
  underdetermined,
  domain_error,
  degenerate_cost,
  diverged,
  config_error,
  io_error,
};

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& what) { throw error(c, what); }

}  // namespace bai
