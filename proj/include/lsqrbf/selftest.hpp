#ifndef LSQRBF_SELFTEST_HPP
#define LSQRBF_SELFTEST_HPP

#include <iosfwd>

namespace lsqrbf {

/// Runs a fast suite of checks against independent reference values; returns the failure count.
int run_selftest(std::ostream& out);

} // namespace lsqrbf

#endif
