#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ahltl/formula.hpp"
#include "ahltl/model.hpp"

namespace ahltl {

struct CorpusFile {
    std::string name;  // e.g. "prog2.kr", "od.ahltl"
    std::string text;
};

// Every bundled model and formula, in a fixed order.
const std::vector<CorpusFile>& corpus_files();
// Throws Error for an unknown name.
const std::string& corpus_text(std::string_view name);

struct Fixture {
    std::string name;
    std::string model_file;
    std::string formula_file;
    KripkeStructure model;
    Formula formula;
    std::string expected;  // "HOLDS" or "FAILS" under the asynchronous reading
    std::string note;
};

std::vector<Fixture> corpus_build();

}  // namespace ahltl
