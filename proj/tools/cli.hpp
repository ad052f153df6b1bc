#pragma once

#include <iosfwd>

namespace blab::cli {

// exit codes: 0 ok, 1 verification failures, 2 usage or runtime error
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace blab::cli
