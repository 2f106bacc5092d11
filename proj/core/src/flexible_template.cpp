#include "univ/template.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "univ/matching.hpp"
#include "univ/rng.hpp"

namespace univ {

int FlexibleTemplate::max_degree() const {
  int best = 0;
  std::vector<int> right(right_size(), 0);
  for (const auto& row : adjacency) {
    best = std::max(best, static_cast<int>(row.size()));
    for (int r : row) ++right[static_cast<std::size_t>(r)];
  }
  for (int d : right) best = std::max(best, d);
  return best;
}

std::vector<std::vector<int>> FlexibleTemplate::right_adjacency() const {
  std::vector<std::vector<int>> out(right_size());
  for (std::size_t x = 0; x < adjacency.size(); ++x)
    for (int r : adjacency[x]) out[static_cast<std::size_t>(r)].push_back(static_cast<int>(x));
  return out;
}

Expected<std::vector<int>> template_matching(const FlexibleTemplate& t, const std::vector<int>& z_subset) {
  if (z_subset.size() != t.n0 / 3) throw std::invalid_argument("template_matching: |Z'| must be n0/3");
  // Compress Y ∪ Z' to [0, n0).
  std::vector<int> local(t.right_size(), -1);
  std::vector<int> global;
  for (std::size_t y = 0; y < t.y_size(); ++y) {
    local[y] = static_cast<int>(global.size());
    global.push_back(static_cast<int>(y));
  }
  for (int z : z_subset) {
    if (z < 0 || static_cast<std::size_t>(z) >= t.z_size())
      throw std::invalid_argument("template_matching: Z position out of range");
    std::size_t idx = t.y_size() + static_cast<std::size_t>(z);
    if (local[idx] >= 0) throw std::invalid_argument("template_matching: repeated Z position");
    local[idx] = static_cast<int>(global.size());
    global.push_back(static_cast<int>(idx));
  }
  std::vector<std::vector<int>> adj(t.n0);
  for (std::size_t x = 0; x < t.n0; ++x)
    for (int r : t.adjacency[x])
      if (local[static_cast<std::size_t>(r)] >= 0) adj[x].push_back(local[static_cast<std::size_t>(r)]);
  auto m = capacitated_matching(adj, std::vector<int>(t.n0, 1), global.size());
  if (!m.saturated) {
    VertexList witness(m.deficient_left.begin(), m.deficient_left.end());
    return fail("template_matching", "no perfect matching for the given Z'", witness);
  }
  std::vector<int> out(t.n0);
  for (std::size_t x = 0; x < t.n0; ++x) out[x] = global[static_cast<std::size_t>(m.assigned[x][0])];
  return out;
}

namespace {

std::uint64_t choose(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  long double acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(acc + 0.5L);
}

// Left-regular sample with right degrees capped at max_degree.
std::optional<FlexibleTemplate> sample(std::size_t n0, int degree, int max_degree, Rng& rng) {
  FlexibleTemplate t;
  t.n0 = n0;
  t.adjacency.resize(n0);
  std::vector<int> right_deg(t.right_size(), 0);
  std::vector<int> all(t.right_size());
  for (std::size_t r = 0; r < all.size(); ++r) all[r] = static_cast<int>(r);
  for (std::size_t x = 0; x < n0; ++x) {
    std::vector<int> open;
    for (int r : all)
      if (right_deg[static_cast<std::size_t>(r)] < max_degree) open.push_back(r);
    if (open.size() < static_cast<std::size_t>(degree)) return std::nullopt;
    auto picks = rng.sample(open, static_cast<std::size_t>(degree));
    std::sort(picks.begin(), picks.end());
    for (int r : picks) ++right_deg[static_cast<std::size_t>(r)];
    t.adjacency[x] = std::move(picks);
  }
  return t;
}

// Kuhn's augmenting paths on the template restricted to Y ∪ Z'; used for the
// bulk certification where only a yes/no answer is needed.
class QuickMatcher {
 public:
  explicit QuickMatcher(const FlexibleTemplate& t)
      : t_(t), allowed_(t.right_size(), 0), owner_(t.right_size(), -1), seen_(t.right_size(), 0) {}

  bool perfect(const std::vector<int>& z) {
    std::fill(allowed_.begin(), allowed_.begin() + static_cast<std::ptrdiff_t>(t_.y_size()), 1);
    std::fill(allowed_.begin() + static_cast<std::ptrdiff_t>(t_.y_size()), allowed_.end(), 0);
    for (int v : z) allowed_[t_.y_size() + static_cast<std::size_t>(v)] = 1;
    std::fill(owner_.begin(), owner_.end(), -1);
    for (std::size_t x = 0; x < t_.n0; ++x) {
      ++stamp_;
      if (!augment(static_cast<int>(x))) return false;
    }
    return true;
  }

 private:
  bool augment(int x) {
    for (int r : t_.adjacency[static_cast<std::size_t>(x)]) {
      auto ri = static_cast<std::size_t>(r);
      if (!allowed_[ri] || seen_[ri] == stamp_) continue;
      seen_[ri] = stamp_;
      if (owner_[ri] < 0 || augment(owner_[ri])) {
        owner_[ri] = x;
        return true;
      }
    }
    return false;
  }

  const FlexibleTemplate& t_;
  std::vector<char> allowed_;
  std::vector<int> owner_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t stamp_ = 0;
};

// Returns the first Z' without a perfect matching, if any.
std::optional<std::pair<std::vector<int>, VertexList>> certify(FlexibleTemplate& t, const TemplateOptions& o,
                                                               Rng& rng) {
  const std::size_t zs = t.z_size(), pick = t.n0 / 3;
  const std::uint64_t total = choose(zs, pick, o.exhaustive_cap);
  QuickMatcher quick(t);
  auto check = [&](const std::vector<int>& z) -> std::optional<std::pair<std::vector<int>, VertexList>> {
    ++t.checked;
    if (quick.perfect(z)) return std::nullopt;
    auto m = template_matching(t, z);
    if (m.ok()) throw std::logic_error("flexible template: matchers disagree");
    return std::make_pair(z, m.error().witness);
  };
  std::vector<int> all(zs);
  for (std::size_t i = 0; i < zs; ++i) all[i] = static_cast<int>(i);
  auto random_probe = [&](int trials) -> std::optional<std::pair<std::vector<int>, VertexList>> {
    for (int trial = 0; trial < trials; ++trial) {
      auto z = rng.sample(all, pick);
      std::sort(z.begin(), z.end());
      if (auto bad = check(z)) return bad;
    }
    return std::nullopt;
  };
  t.checked = 0;
  if (total <= o.exhaustive_cap) {
    // Cheap random screening rejects most defective samples early.
    if (total > 4096)
      if (auto bad = random_probe(512)) return bad;
    t.checked = 0;
    t.exhaustive = true;
    std::vector<int> z(pick);
    for (std::size_t i = 0; i < pick; ++i) z[i] = static_cast<int>(i);
    for (;;) {
      if (auto bad = check(z)) return bad;
      // Next combination in lexicographic order.
      std::size_t i = pick;
      while (i > 0 && static_cast<std::size_t>(z[i - 1]) == zs - pick + i - 1) --i;
      if (i == 0) break;
      ++z[i - 1];
      for (std::size_t j = i; j < pick; ++j) z[j] = z[j - 1] + 1;
    }
    return std::nullopt;
  }
  t.exhaustive = false;
  return random_probe(o.verification_trials);
}

}  // namespace

Expected<FlexibleTemplate> build_flexible_template(std::size_t n0, std::uint64_t seed, const TemplateOptions& o) {
  if (n0 == 0 || n0 % 3 != 0) throw std::invalid_argument("flexible template: n0 must be a positive multiple of 3");
  if (o.min_degree < 1 || o.max_degree < o.min_degree)
    throw std::invalid_argument("flexible template: invalid degree range");
  Rng rng(derive_seed(seed, n0, 0x7e3));
  const int top = std::min<int>(o.max_degree, static_cast<int>(4 * n0 / 3));
  std::string last;
  VertexList last_witness;
  for (int degree = std::min(o.min_degree, top); degree <= top; ++degree) {
    for (int attempt = 0; attempt < o.attempts_per_degree; ++attempt) {
      auto t = sample(n0, degree, o.max_degree, rng);
      if (!t) continue;
      t->seed = seed;
      auto bad = certify(*t, o, rng);
      if (!bad) return std::move(*t);
      std::ostringstream why;
      why << "degree " << degree << ": Z' = {";
      for (std::size_t i = 0; i < bad->first.size(); ++i) why << (i ? "," : "") << bad->first[i];
      why << "} has no perfect matching";
      last = why.str();
      last_witness = bad->second;
      // A complete template is the last resort; no point resampling it.
      if (degree == static_cast<int>(4 * n0 / 3)) break;
    }
  }
  return fail("build_flexible_template", "no certified template within budget; last defect " + last,
              last_witness);
}

std::string template_to_json(const FlexibleTemplate& t) {
  nlohmann::json j;
  j["n0"] = t.n0;
  j["seed"] = t.seed;
  j["exhaustive"] = t.exhaustive;
  j["checked"] = t.checked;
  j["adjacency"] = t.adjacency;
  return j.dump();
}

FlexibleTemplate template_from_json(const std::string& text) {
  FlexibleTemplate t;
  try {
    auto j = nlohmann::json::parse(text);
    t.n0 = j.at("n0").get<std::size_t>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.exhaustive = j.value("exhaustive", false);
    t.checked = j.value("checked", std::size_t{0});
    t.adjacency = j.at("adjacency").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("template JSON: ") + e.what());
  }
  if (t.n0 % 3 != 0 || t.adjacency.size() != t.n0) throw std::invalid_argument("template JSON: bad sizes");
  for (const auto& row : t.adjacency)
    for (int r : row)
      if (r < 0 || static_cast<std::size_t>(r) >= t.right_size())
        throw std::invalid_argument("template JSON: right index out of range");
  return t;
}

struct TemplateCache::Impl {
  std::mutex mutex;
  std::map<std::pair<std::size_t, std::uint64_t>, FlexibleTemplate> entries;
  std::string dir;
};

TemplateCache::TemplateCache() : impl_(new Impl) {
  if (const char* env = std::getenv("UNIV_TEMPLATE_CACHE")) impl_->dir = env;
}

TemplateCache& TemplateCache::instance() {
  static TemplateCache cache;
  return cache;
}

void TemplateCache::set_directory(std::string dir) {
  std::lock_guard lock(impl_->mutex);
  impl_->dir = std::move(dir);
}

void TemplateCache::clear() {
  std::lock_guard lock(impl_->mutex);
  impl_->entries.clear();
}

Expected<FlexibleTemplate> TemplateCache::get(std::size_t n0, std::uint64_t seed, const TemplateOptions& options) {
  std::lock_guard lock(impl_->mutex);
  auto key = std::make_pair(n0, seed);
  if (auto it = impl_->entries.find(key); it != impl_->entries.end()) return it->second;
  std::filesystem::path file;
  if (!impl_->dir.empty()) {
    file = std::filesystem::path(impl_->dir) / ("template_" + std::to_string(n0) + "_" + std::to_string(seed) + ".json");
    std::ifstream in(file);
    if (in) {
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        auto t = template_from_json(buf.str());
        if (t.n0 == n0 && t.max_degree() <= options.max_degree) {
          impl_->entries.emplace(key, t);
          return t;
        }
      } catch (const std::invalid_argument&) {
        // Unreadable cache entries are rebuilt.
      }
    }
  }
  auto built = build_flexible_template(n0, seed, options);
  if (!built.ok()) return built;
  impl_->entries.emplace(key, *built);
  if (!file.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
    std::ofstream out(file);
    if (out) out << template_to_json(*built);
  }
  return built;
}

}  // namespace univ
