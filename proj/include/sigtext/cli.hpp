#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigtext {

// Runs one `sigtext` command. args excludes the program name.
// Exit status: 0 on success, 1 on a runtime error (one JSON line on err),
// 2 on a usage error (usage text on err).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

} // namespace sigtext
