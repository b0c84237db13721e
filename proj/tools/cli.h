#ifndef EMPVIX_TOOLS_CLI_H_
#define EMPVIX_TOOLS_CLI_H_

#include <iosfwd>

namespace empvix::cli {

// Process exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kNumericalError = 3;
inline constexpr int kCalibrationAtBound = 4;

// Entry point of the `empvix` tool: fit, price, tables, simulate, calibrate,
// calibrate32, compare32. Results go to `out` (JSON or CSV), logs and
// errors to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace empvix::cli

#endif  // EMPVIX_TOOLS_CLI_H_
