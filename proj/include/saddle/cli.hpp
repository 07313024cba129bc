#pragma once

// Command implementations behind the `saddle` executable. Each command
// reads a JSON problem file, writes a report to `out` and returns the
// process exit code.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace saddle::cli {

enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,  // verify slope FAIL or embedded expectation mismatch
    kInvalidInput = 2,
    kDegenerate = 3,
    kNoStationaryPoints = 4,
    kBudgetExceeded = 5,
    kUnsupportedGeometry = 6,
};

struct Options {
    std::optional<int> order;
    std::optional<double> tol;
    /// Each entry is "x=0.1,y=-2".
    std::vector<std::string> seeds;
    std::optional<std::string> csv_path;
    /// Exit 0 iff the run matches the file's "expect" block (which may
    /// expect a nonzero exit code), 1 otherwise.
    bool check_expectations = false;
};

int run_expand(const std::string& path, const Options& options, std::ostream& out, std::ostream& err);
int run_verify(const std::string& path, const Options& options, std::ostream& out, std::ostream& err);
int run_genfun(const std::string& path, const Options& options, std::ostream& out, std::ostream& err);

/// "%.12g" with negative zero printed as 0.
std::string format_number(double v);

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_field(const std::string& s);

}  // namespace saddle::cli
