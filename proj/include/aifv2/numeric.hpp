#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "aifv2/errors.hpp"
#include "aifv2/rational.hpp"

namespace aifv2 {

// Numeric abstraction shared by every templated module.  V is either double
// (fast, tolerance-based) or Rat (exact, with a true +infinity sentinel).
template <class V>
struct num_traits;

template <>
struct num_traits<double> {
  static constexpr bool exact = false;

  static double infinity() { return std::numeric_limits<double>::infinity(); }
  static bool is_infinite(double v) { return std::isinf(v); }
  static double from_int(long long v) { return static_cast<double>(v); }
  static double to_double(double v) { return v; }

  // Seed for the cost-parameter iteration: 2 - log2(3).
  static double initial_cost_param() { return 2.0 - std::log2(3.0); }

  // Accepts the same shapes as exact parsing ("0.25", "1/4", "3/2^3") plus
  // arbitrary-precision decimals, which are rounded to nearest double.
  static double parse(const std::string& text) {
    std::size_t slash = text.find('/');
    try {
      if (slash != std::string::npos) return Rat::parse(text).to_double();
      std::size_t pos = 0;
      double v = std::stod(text, &pos);
      if (pos != text.size())
        throw InputError("number parse: trailing junk in '" + text + "'");
      return v;
    } catch (const std::invalid_argument&) {
      throw InputError("number parse: invalid number '" + text + "'");
    } catch (const std::out_of_range&) {
      throw InputError("number parse: out of range '" + text + "'");
    }
  }

  static std::string to_string(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
};

template <>
struct num_traits<Rat> {
  static constexpr bool exact = true;

  static Rat infinity() { return Rat::infinity(); }
  static bool is_infinite(const Rat& v) { return v.is_infinite(); }
  static Rat from_int(long long v) { return Rat(v); }
  static double to_double(const Rat& v) { return v.to_double(); }

  // 2 - log2(3) is irrational; exact mode seeds the iteration with a close
  // rational approximation.  The fixed point reached is unaffected: every
  // subsequent parameter value is an exact rational function of tree
  // functionals, and termination compares consecutive values exactly.
  static Rat initial_cost_param() { return Rat(415037, 1000000); }

  static Rat parse(const std::string& text) { return Rat::parse(text); }
  static std::string to_string(const Rat& v) { return v.to_string(); }
};

}  // namespace aifv2
