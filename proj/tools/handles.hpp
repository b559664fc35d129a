#pragma once

// Thin RAII layer over the C API handles used by the command-line front end.

#include <memory>
#include <stdexcept>
#include <string>

#include "catamp/catamp.h"

namespace catamp_cli {

/// Raised when a C API call fails; carries the status for exit-code mapping.
class ApiError : public std::runtime_error {
public:
  ApiError(catamp_status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  catamp_status status() const noexcept { return status_; }

private:
  catamp_status status_;
};

inline void check(catamp_status status, const char* call) {
  if (status != CATAMP_OK) {
    throw ApiError(status, std::string(call) + ": " + catamp_status_name(status) + ": " +
                               catamp_last_error());
  }
}

#define CATAMP_CALL(expr) ::catamp_cli::check((expr), #expr)

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};

using Operators = std::unique_ptr<catamp_operators, Deleter<catamp_operators, catamp_operators_destroy>>;
using State = std::unique_ptr<catamp_state, Deleter<catamp_state, catamp_state_destroy>>;
using Trajectory =
    std::unique_ptr<catamp_trajectory, Deleter<catamp_trajectory, catamp_trajectory_destroy>>;
using Histogram =
    std::unique_ptr<catamp_histogram, Deleter<catamp_histogram, catamp_histogram_destroy>>;
using Sweep = std::unique_ptr<catamp_sweep, Deleter<catamp_sweep, catamp_sweep_destroy>>;
using Report =
    std::unique_ptr<catamp_check_report, Deleter<catamp_check_report, catamp_check_report_destroy>>;

inline Operators make_operators(int n_atoms) {
  catamp_operators* raw = nullptr;
  CATAMP_CALL(catamp_operators_create(n_atoms, &raw));
  return Operators(raw);
}

inline State prepare_state(const catamp_operators* ops, double chi, double theta,
                           catamp_prep_order order) {
  catamp_state* raw = nullptr;
  CATAMP_CALL(catamp_state_prepare(ops, chi, theta, order, &raw));
  return State(raw);
}

}  // namespace catamp_cli
