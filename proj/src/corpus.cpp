#include "arfrac/corpus.hpp"

#include <algorithm>
#include <cstdlib>

#include "arfrac/error.hpp"

namespace arfrac {

std::filesystem::path corpus_dir() {
  if (const char* env = std::getenv("ARFRAC_CORPUS"); env && *env) return env;
  return ARFRAC_CORPUS_DIR;
}

std::vector<CorpusEntry> corpus_list() {
  const auto dir = corpus_dir();
  if (!std::filesystem::is_directory(dir)) {
    throw Error("corpus", ErrorCode::MissingFile, "corpus directory '" + dir.string() + "' not found");
  }
  std::vector<CorpusEntry> out;
  for (const auto& f : std::filesystem::directory_iterator(dir)) {
    if (f.path().extension() != ".json") continue;
    out.push_back({f.path().stem().string(), f.path(), load_system(f.path())});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

CorpusEntry load_corpus(std::string_view name) {
  const auto path = corpus_dir() / (std::string(name) + ".json");
  if (!std::filesystem::exists(path)) {
    throw Error("corpus", ErrorCode::MissingFile, "no corpus system named '" + std::string(name) + "'");
  }
  return {std::string(name), path, load_system(path)};
}

}  // namespace arfrac
