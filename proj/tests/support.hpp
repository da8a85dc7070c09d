#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "qforge/corpus.hpp"
#include "qforge/rng.hpp"

namespace qf_test {

inline std::filesystem::path fixtures() { return QF_FIXTURES; }
inline std::filesystem::path corpora() { return QF_CORPORA; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> n{0};
    path_ = std::filesystem::temp_directory_path() /
            ("qforge-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

/// Both bundled sample corpora, news first.
inline qforge::CorpusSource sample_corpus() {
  return qforge::CorpusSource::merge({qforge::load_corpus(corpora() / "news_sample.txt", 20, 2000),
                                      qforge::load_corpus(corpora() / "classical_sample.txt", 20, 2000)});
}

/// Random code points drawn from a mixed Arabic alphabet: letters,
/// tashkeel, tatweel, digits, spaces and a few Latin characters.
inline std::u32string random_arabic(qforge::Rng& rng, std::size_t max_len) {
  static const std::u32string pool =
      U"ابتثجحخدذرزسشصضطظعغفقكلمنهويأإآةىء"
      U"ًٌٍَُِّْٰـ"
      U"٠١٢0129  AbZ،.";
  const auto len = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(max_len)));
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i)
    s.push_back(pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))]);
  return s;
}

}  // namespace qf_test
