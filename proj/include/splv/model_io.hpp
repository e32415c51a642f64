#pragma once

// Text format for FSMv machines:
//
//   fsmv Name {
//     var x in {a, b};
//     global x = a => y = c;        # optional, defaults to true
//     events {e1, e2};
//     states {s0, s1};
//     initial s0;
//     trans s0 -> s1 on e1 when x = a;
//   }

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "splv/fsmv.hpp"

namespace splv {

std::vector<FsmvMachine> parse_models(std::string_view text, const std::string& source = "<model>");
/// Exactly one machine.
FsmvMachine parse_model(std::string_view text, const std::string& source = "<model>");
std::string print_model(const FsmvMachine& m);

/// Whole file as text; throws IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
FsmvMachine load_model(const std::filesystem::path& path);

}  // namespace splv
