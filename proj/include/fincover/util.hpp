#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fincover {

// Hard errors (bad preconditions, malformed files, internal invariant breaks).
// Recoverable outcomes (validation reports, mismatch certificates, infeasibility)
// are ordinary return values instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream ss;
  (ss << ... << args);
  return ss.str();
}

template <typename Range>
std::string join(const Range& r, const std::string& sep) {
  std::ostringstream ss;
  bool first = true;
  for (const auto& x : r) {
    if (!first) ss << sep;
    ss << x;
    first = false;
  }
  return ss.str();
}

// Deterministic RNG wrapper.  All shuffles go through this class so outputs
// are reproducible across standard library implementations (std::shuffle's
// exact behaviour is unspecified; Fisher-Yates below is pinned).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform value in [0, n).  Modulo bias is irrelevant here: we need
  // determinism, not statistical perfection.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // A permutation of {0..n-1}.
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

// Derives a fresh id from `base`, avoiding everything in `taken`.
// The result is inserted into `taken`.
inline std::string fresh_id(const std::string& base, std::set<std::string>& taken) {
  std::string id = base;
  while (taken.count(id)) id += "'";
  taken.insert(id);
  return id;
}

}  // namespace fincover
