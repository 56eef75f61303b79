#pragma once

#include "ks/problem.hpp"
#include "ks/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ks {

// Randomized property suite behind `check`; the seed fixes every draw.
Report run_suite(std::uint64_t seed);

// 0 when every row succeeded, 2 when some row is NoCertificate, Divergent or failed.
int exit_code(const Report& r);

// argv without the program name. Exit codes: 0 success, 2 no certificate or divergence, 3 invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ks
