#pragma once

#include <stdexcept>
#include <string>

namespace wsplan {

enum class Errc {
    io = 1,
    parse,
    validation,
    degenerate_input,
    invalid_endpoint,
    no_route,
    non_convergence,
    planning_failure,
    singular_configuration,
    bad_argument,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

const char* errc_name(Errc code);

} // namespace wsplan
