#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cyclesparse {

// Command-line front end. Returns the process exit code: 0 on success, 1
// when a requested invariant fails (the failing check is named on err), 2 on
// usage errors. When report_out is non-null the serialized report document
// is also stored there (it is byte-identical across runs for a fixed input,
// seed, and flag set).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err, std::string* report_out = nullptr);

}  // namespace cyclesparse
