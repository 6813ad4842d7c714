#pragma once

// The bundled system corpus: the single source of expected dimensions and
// exactness flags for tests and the CLI.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "arfrac/system_io.hpp"

namespace arfrac {

struct CorpusEntry {
  std::string name;
  std::filesystem::path path;
  LoadedSystem loaded;
};

/// $ARFRAC_CORPUS when set, else the corpus directory of the source tree.
std::filesystem::path corpus_dir();

/// Every *.json system in corpus_dir(), sorted by name.
std::vector<CorpusEntry> corpus_list();

/// Throws Error(MissingFile) for unknown names.
CorpusEntry load_corpus(std::string_view name);

}  // namespace arfrac
