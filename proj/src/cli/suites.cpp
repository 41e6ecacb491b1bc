#include <map>

#include "anisolab/cli/report.hpp"

namespace anisolab {

namespace {

// Reference instances; every one fixes its seed.
const std::map<std::string, std::string>& suites() {
  static const std::map<std::string, std::string> table = {
      {"bbm", R"([experiment]
name = bbm
seed = 1
n = 1
p = 2
[body]
shape = box
half_widths = 1
[function]
kind = poly-bump
sigma = 1
m = 3
)"},
      {"ms", R"([experiment]
name = ms
seed = 1
n = 1
p = 1
[body]
shape = box
half_widths = 1
[function]
kind = indicator-box
lo = 0
hi = 1
)"},
      {"large-lambda", R"([experiment]
name = bvsy-large-lambda
seed = 1
n = 1
p = 2
[body]
shape = box
half_widths = 1
[function]
kind = poly-bump
sigma = 1
m = 3
[grid]
lambda = 10, 17.7827941, 31.6227766, 56.2341325, 100, 177.827941, 316.227766, 562.341325, 1000, 1778.27941, 3162.27766, 5623.41325, 10000
[mc]
samples = 50000
)"},
      {"small-lambda", R"([experiment]
name = gy-small-lambda
seed = 1
n = 1
p = 1
[body]
shape = box
half_widths = 1
[function]
kind = indicator-box
lo = 0
hi = 1
[grid]
lambda = 0.5, 0.1, 0.01
)"},
      {"quasinorm", R"([experiment]
name = quasinorm
seed = 1
n = 1
p = 1
part = b
[body]
shape = box
half_widths = 1
[function]
kind = indicator-box
lo = 0
hi = 1
)"},
      {"sandwich", R"([experiment]
name = sandwich
seed = 1
n = 1
p = 1
part = b
[body]
shape = box
half_widths = 1
[function]
kind = indicator-box
lo = 0
hi = 1
)"},
      {"bp", R"([experiment]
name = verify-bp
seed = 1
n = 2
[bp]
instance = both
)"},
      {"prop21", R"([experiment]
name = verify-prop21
seed = 1
n = 1
[function]
kind = indicator-box
lo = 0
hi = 1
[grid]
gamma = 0.5, 1, 2
)"},
      {"prop22", R"([experiment]
name = verify-prop22
seed = 1
n = 2
p = 2
[body]
shape = box
half_widths = 1
[function]
kind = poly-bump
sigma = 1
m = 3
[grid]
lambda = 1
[mc]
samples = 2000
resolution = 400
table_nodes = 4000
)"},
      {"claims", R"([experiment]
name = verify-claims
seed = 1
n = 1
p = 2
[body]
shape = box
half_widths = 1
[function]
kind = poly-bump
sigma = 1
m = 3
)"},
      {"m1", R"([experiment]
name = m1
seed = 1
n = 1
p = 1
[body]
shape = box
half_widths = 1
[function]
kind = indicator-box
lo = 0
hi = 1
[grid]
lambda = 1, 0.1, 0.01
[certificate]
r = 1
)"},
  };
  return table;
}

}  // namespace

std::string builtin_suite_config(const std::string& suite) {
  auto it = suites().find(suite);
  return it == suites().end() ? std::string{} : it->second;
}

std::vector<std::string> builtin_suites() {
  std::vector<std::string> names;
  for (const auto& [name, text] : suites()) names.push_back(name);
  return names;
}

}  // namespace anisolab
