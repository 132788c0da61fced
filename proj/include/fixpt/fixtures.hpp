#pragma once

// Built-in scenarios, available without a file on disk. Each entry is a copy
// of the same-named file under fixtures/.

#include <string>
#include <utility>
#include <vector>

namespace fixpt::fixtures {

struct Fixture {
    std::string name;
    std::string summary;
    std::string json;
};

inline const std::vector<Fixture>& all() {
    static const std::vector<Fixture> list{
        {"example-5-11", "periodic obstruction on a doubled four-holed sphere: N(f) = 0, N(f^2) = 4",
         R"json({
  "kind": "periodic",
  "description": "doubled four-holed sphere, f swaps the halves, n = 2",
  "n": 2,
  "components": [
    {
      "l": 1,
      "group": {"kind": "free", "rank": 2, "radius": 4},
      "phi": ["b", "a"],
      "records": [],
      "action": {"kind": "trivial"}
    },
    {
      "l": 2,
      "group": {"kind": "free", "rank": 2, "radius": 4},
      "phi": ["a", "b"],
      "records": [
        {"id": "x", "index": 1, "class_word": "a", "orbit": ["x", "f(x)"]},
        {"id": "f(x)", "index": 1, "class_word": "b", "orbit": ["f(x)", "x"]},
        {"id": "x'", "index": 1, "class_word": "aa", "orbit": ["x'", "f(x')"]},
        {"id": "f(x')", "index": 1, "class_word": "bb", "orbit": ["f(x')", "x'"]}
      ],
      "action": {"kind": "endomorphism", "images": ["b", "a"]}
    }
  ]
}
)json"},
    };
    return list;
}

inline const Fixture* find(const std::string& name) {
    for (const auto& f : all())
        if (f.name == name)
            return &f;
    return nullptr;
}

} // namespace fixpt::fixtures
