#include "asl/class_spec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "asl/errors.hpp"

namespace asl {

namespace {

// s = s1*s2 factorizations admissible for a submatrix class.
std::vector<std::pair<int32_t, int32_t>> factorizations(int32_t s, int32_t n1, int32_t n2) {
  std::vector<std::pair<int32_t, int32_t>> out;
  for (int32_t s1 = 1; s1 <= s; ++s1) {
    if (s % s1 != 0) continue;
    const int32_t s2 = s / s1;
    if (s1 <= n1 && s2 <= n2) out.emplace_back(s1, s2);
  }
  return out;
}

// Exact binomial, saturating at `cap` (cap + 1 means "exceeds cap").
uint64_t binomial_capped(int64_t n, int64_t k, uint64_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step
    r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
    if (r > cap) return cap + 1;
  }
  return static_cast<uint64_t>(r);
}

void emit_subsets(int32_t n, int32_t s, int32_t first, Support& cur,
                  std::vector<Support>& out) {
  if (static_cast<int32_t>(cur.size()) == s) {
    out.push_back(cur);
    return;
  }
  const int32_t need = s - static_cast<int32_t>(cur.size());
  for (int32_t i = first; i + need - 1 <= n; ++i) {
    cur.push_back(i);
    emit_subsets(n, s, i + 1, cur, out);
    cur.pop_back();
  }
}

// Start positions of k non-overlapping length-s tiles, in order.
void emit_tilings(int32_t n, int32_t s, int32_t k, int32_t first,
                  std::vector<int32_t>& starts, std::vector<Support>& out) {
  if (static_cast<int32_t>(starts.size()) == k) {
    Support m;
    m.reserve(static_cast<size_t>(k) * s);
    for (int32_t a : starts)
      for (int32_t j = 0; j < s; ++j) m.push_back(a + j);
    out.push_back(std::move(m));
    return;
  }
  const int32_t remaining = k - static_cast<int32_t>(starts.size());
  for (int32_t a = first; a + remaining * s - 1 <= n; ++a) {
    starts.push_back(a);
    emit_tilings(n, s, k, a + s, starts, out);
    starts.pop_back();
  }
}

Support star_support(int32_t p, int32_t center, const std::vector<int32_t>& leaves) {
  Support m;
  m.reserve(leaves.size());
  for (int32_t w : leaves) m.push_back(edge_index(p, center, w));
  std::sort(m.begin(), m.end());
  return m;
}

void emit_stars(int32_t p, int32_t s, std::vector<Support>& out) {
  for (int32_t c = 1; c <= p; ++c) {
    std::vector<int32_t> others;
    for (int32_t w = 1; w <= p; ++w)
      if (w != c) others.push_back(w);
    // all s-subsets of the p-1 possible leaves
    std::vector<int32_t> leaves(s);
    std::vector<Support> subsets;
    Support tmp;
    emit_subsets(static_cast<int32_t>(others.size()), s, 1, tmp, subsets);
    for (const auto& sub : subsets) {
      for (int32_t j = 0; j < s; ++j) leaves[j] = others[sub[j] - 1];
      out.push_back(star_support(p, c, leaves));
    }
  }
}

// Unions of k edge-disjoint s-stars as distinct sets. Enumerates decompositions
// (ordered canonically by first edge index) and deduplicates the unions.
void emit_union_stars(const ClassSpec& spec, uint64_t cap, std::set<Support>& out) {
  const int32_t p = spec.p, s = spec.s, k = spec.k;
  // the single-star list alone dwarfing the cap means the union class does
  // too; refuse before allocating it
  const uint64_t singles_count = binomial_capped(p - 1, s, 100 * cap);
  if (singles_count > 100 * cap / static_cast<uint64_t>(p))
    throw RefusalError("enumerate_class: union-of-stars cardinality exceeds cap " +
                       std::to_string(cap));
  std::vector<Support> singles;
  emit_stars(p, s, singles);
  std::sort(singles.begin(), singles.end());

  std::vector<const Support*> chosen;
  std::vector<char> used(static_cast<size_t>(edge_count(p)) + 1, 0);

  struct Rec {
    const ClassSpec& spec;
    const std::vector<Support>& singles;
    std::set<Support>& out;
    uint64_t cap;
    std::vector<char>& used;

    void go(size_t first, int32_t left, Support& acc) {
      if (left == 0) {
        Support m = acc;
        std::sort(m.begin(), m.end());
        out.insert(std::move(m));
        if (out.size() > cap)
          throw RefusalError("enumerate_class: union-of-stars cardinality exceeds cap " +
                             std::to_string(cap));
        return;
      }
      for (size_t i = first; i < singles.size(); ++i) {
        const Support& st = singles[i];
        bool ok = true;
        for (Coord e : st)
          if (used[e]) {
            ok = false;
            break;
          }
        if (!ok) continue;
        for (Coord e : st) used[e] = 1;
        const size_t before = acc.size();
        acc.insert(acc.end(), st.begin(), st.end());
        go(i + 1, left - 1, acc);
        acc.resize(before);
        for (Coord e : st) used[e] = 0;
      }
    }
  } rec{spec, singles, out, cap, used};

  Support acc;
  rec.go(0, k, acc);
}

}  // namespace

ClassSpec ClassSpec::sset(int32_t n, int32_t s) {
  ClassSpec c;
  c.kind = ClassKind::SSet;
  c.n = n;
  c.s = s;
  c.validate();
  return c;
}

ClassSpec ClassSpec::interval(int32_t n, int32_t s) {
  ClassSpec c;
  c.kind = ClassKind::SInterval;
  c.n = n;
  c.s = s;
  c.validate();
  return c;
}

ClassSpec ClassSpec::union_intervals(int32_t n, int32_t s, int32_t k) {
  ClassSpec c;
  c.kind = ClassKind::UnionIntervals;
  c.n = n;
  c.s = s;
  c.k = k;
  c.validate();
  return c;
}

ClassSpec ClassSpec::star(int32_t p, int32_t s) {
  ClassSpec c;
  c.kind = ClassKind::SStar;
  c.p = p;
  c.s = s;
  c.n = edge_count(p);
  c.validate();
  return c;
}

ClassSpec ClassSpec::union_stars(int32_t p, int32_t s, int32_t k) {
  ClassSpec c;
  c.kind = ClassKind::UnionStars;
  c.p = p;
  c.s = s;
  c.k = k;
  c.n = edge_count(p);
  c.validate();
  return c;
}

ClassSpec ClassSpec::submatrix(int32_t n1, int32_t n2, int32_t s) {
  ClassSpec c;
  c.kind = ClassKind::Submatrix;
  c.n1 = n1;
  c.n2 = n2;
  c.s = s;
  c.n = n1 * n2;
  c.validate();
  return c;
}

void ClassSpec::validate() const {
  switch (kind) {
    case ClassKind::SSet:
    case ClassKind::SInterval:
      if (n < 1 || s < 1 || s > n)
        throw std::invalid_argument(kind_name() + ": need 1 <= s <= n");
      break;
    case ClassKind::UnionIntervals:
      if (n < 1 || s < 1 || k < 1 || static_cast<int64_t>(k) * s > n)
        throw std::invalid_argument("uintervals: need k >= 1 and k*s <= n");
      break;
    case ClassKind::SStar:
      if (p < 3 || s < 2 || s > p - 1)
        throw std::invalid_argument("star: need 2 <= s <= p-1");
      if (n != edge_count(p)) throw std::invalid_argument("star: n must be p(p-1)/2");
      break;
    case ClassKind::UnionStars:
      if (p < 3 || s < 2 || s > p - 1 || k < 1)
        throw std::invalid_argument("ustars: need 2 <= s <= p-1 and k >= 1");
      if (k >= s) throw std::invalid_argument("ustars: requires k < s");
      if (static_cast<int64_t>(k) * (s + 1) > p)
        throw std::invalid_argument("ustars: requires k(s+1) <= p for disjoint feasibility");
      if (n != edge_count(p)) throw std::invalid_argument("ustars: n must be p(p-1)/2");
      break;
    case ClassKind::Submatrix: {
      if (n1 < 1 || n2 < 1 || s < 1 || s > n1 * n2)
        throw std::invalid_argument("submat: need 1 <= s <= n1*n2");
      if (n != n1 * n2) throw std::invalid_argument("submat: n must be n1*n2");
      if (factorizations(s, n1, n2).empty())
        throw std::invalid_argument("submat: s admits no factorization s1*s2 with s1<=n1, s2<=n2");
      break;
    }
  }
}

int32_t ClassSpec::support_size() const {
  switch (kind) {
    case ClassKind::UnionIntervals:
    case ClassKind::UnionStars:
      return k * s;
    default:
      return s;
  }
}

std::string ClassSpec::kind_name() const {
  switch (kind) {
    case ClassKind::SSet: return "sset";
    case ClassKind::SInterval: return "interval";
    case ClassKind::UnionIntervals: return "uintervals";
    case ClassKind::SStar: return "star";
    case ClassKind::UnionStars: return "ustars";
    case ClassKind::Submatrix: return "submat";
  }
  return "?";
}

std::string ClassSpec::to_string() const {
  std::ostringstream os;
  os << kind_name() << ":";
  switch (kind) {
    case ClassKind::SSet:
    case ClassKind::SInterval:
      os << "n=" << n << ",s=" << s;
      break;
    case ClassKind::UnionIntervals:
      os << "n=" << n << ",s=" << s << ",k=" << k;
      break;
    case ClassKind::SStar:
      os << "p=" << p << ",s=" << s;
      break;
    case ClassKind::UnionStars:
      os << "p=" << p << ",s=" << s << ",k=" << k;
      break;
    case ClassKind::Submatrix:
      os << "n1=" << n1 << ",n2=" << n2 << ",s=" << s;
      break;
  }
  return os.str();
}

ClassSpec ClassSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("class spec: expected '<kind>:<params>', got '" + std::string(text) + "'");
  const std::string kind(text.substr(0, colon));
  std::map<std::string, int32_t> kv;
  std::string rest(text.substr(colon + 1));
  std::istringstream is(rest);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("class spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    int32_t value = 0;
    try {
      size_t pos = 0;
      value = std::stoi(item.substr(eq + 1), &pos);
      if (pos != item.size() - eq - 1) throw std::invalid_argument("");
    } catch (...) {
      throw std::invalid_argument("class spec: bad integer in '" + item + "'");
    }
    if (!kv.emplace(key, value).second)
      throw std::invalid_argument("class spec: duplicate key '" + key + "'");
  }
  auto need = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end())
      throw std::invalid_argument("class spec: missing key '" + std::string(key) + "'");
    kv.erase(it);
    return it->second;
  };
  ClassSpec out;
  if (kind == "sset") {
    out = sset(need("n"), need("s"));
  } else if (kind == "interval") {
    out = interval(need("n"), need("s"));
  } else if (kind == "uintervals") {
    out = union_intervals(need("n"), need("s"), need("k"));
  } else if (kind == "star") {
    out = star(need("p"), need("s"));
  } else if (kind == "ustars") {
    out = union_stars(need("p"), need("s"), need("k"));
  } else if (kind == "submat") {
    out = submatrix(need("n1"), need("n2"), need("s"));
  } else {
    throw std::invalid_argument("class spec: unknown kind '" + kind + "'");
  }
  if (!kv.empty())
    throw std::invalid_argument("class spec: unknown key '" + kv.begin()->first + "'");
  return out;
}

Coord edge_index(int32_t p, int32_t u, int32_t v) {
  if (u == v || u < 1 || v < 1 || u > p || v > p)
    throw std::invalid_argument("edge_index: bad vertex pair");
  if (u > v) std::swap(u, v);
  // edges (1,2)...(1,p) come first, then (2,3)... ; all 1-based
  const int64_t before = static_cast<int64_t>(u - 1) * p - static_cast<int64_t>(u - 1) * u / 2;
  return static_cast<Coord>(before + (v - u));
}

std::pair<int32_t, int32_t> edge_vertices(int32_t p, Coord e) {
  if (e < 1 || e > edge_count(p)) throw std::invalid_argument("edge_vertices: index out of range");
  int64_t rem = e;
  for (int32_t u = 1; u < p; ++u) {
    const int64_t row = p - u;
    if (rem <= row) return {u, static_cast<int32_t>(u + rem)};
    rem -= row;
  }
  throw std::logic_error("edge_vertices: unreachable");
}

uint64_t class_cardinality(const ClassSpec& spec, uint64_t cap) {
  spec.validate();
  uint64_t count = 0;
  switch (spec.kind) {
    case ClassKind::SSet:
      count = binomial_capped(spec.n, spec.s, cap);
      break;
    case ClassKind::SInterval:
      count = static_cast<uint64_t>(spec.n - spec.s + 1);
      break;
    case ClassKind::UnionIntervals:
      count = binomial_capped(static_cast<int64_t>(spec.n) - static_cast<int64_t>(spec.k) * (spec.s - 1),
                              spec.k, cap);
      break;
    case ClassKind::SStar:
      count = binomial_capped(spec.p - 1, spec.s, cap);
      if (count <= cap) {
        if (count > cap / spec.p) count = cap + 1;
        else count *= static_cast<uint64_t>(spec.p);
      }
      break;
    case ClassKind::UnionStars: {
      std::set<Support> sets;
      emit_union_stars(spec, cap, sets);  // throws RefusalError past the cap
      count = sets.size();
      break;
    }
    case ClassKind::Submatrix: {
      for (auto [s1, s2] : factorizations(spec.s, spec.n1, spec.n2)) {
        const uint64_t a = binomial_capped(spec.n1, s1, cap);
        const uint64_t b = binomial_capped(spec.n2, s2, cap);
        if (a > cap || b > cap || (b != 0 && a > cap / b)) {
          count = cap + 1;
          break;
        }
        count += a * b;
        if (count > cap) break;
      }
      break;
    }
  }
  if (count > cap)
    throw RefusalError("class cardinality exceeds cap " + std::to_string(cap) + " for " +
                       spec.to_string() +
                       (count == cap + 1 ? "" : " (cardinality " + std::to_string(count) + ")"));
  return count;
}

std::vector<Support> enumerate_class(const ClassSpec& spec, uint64_t cap) {
  class_cardinality(spec, cap);  // refuses before any large allocation
  std::vector<Support> out;
  switch (spec.kind) {
    case ClassKind::SSet: {
      Support cur;
      emit_subsets(spec.n, spec.s, 1, cur, out);
      break;
    }
    case ClassKind::SInterval: {
      for (int32_t i = 1; i + spec.s - 1 <= spec.n; ++i) {
        Support m(spec.s);
        for (int32_t j = 0; j < spec.s; ++j) m[j] = i + j;
        out.push_back(std::move(m));
      }
      break;
    }
    case ClassKind::UnionIntervals: {
      std::vector<int32_t> starts;
      emit_tilings(spec.n, spec.s, spec.k, 1, starts, out);
      break;
    }
    case ClassKind::SStar:
      emit_stars(spec.p, spec.s, out);
      break;
    case ClassKind::UnionStars: {
      std::set<Support> sets;
      emit_union_stars(spec, cap, sets);
      out.assign(sets.begin(), sets.end());
      break;
    }
    case ClassKind::Submatrix: {
      for (auto [s1, s2] : factorizations(spec.s, spec.n1, spec.n2)) {
        std::vector<Support> rows, cols;
        Support cur;
        emit_subsets(spec.n1, s1, 1, cur, rows);
        cur.clear();
        emit_subsets(spec.n2, s2, 1, cur, cols);
        for (const auto& r : rows)
          for (const auto& c : cols) {
            Support m;
            m.reserve(static_cast<size_t>(s1) * s2);
            for (int32_t rr : r)
              for (int32_t cc : c) m.push_back((rr - 1) * spec.n2 + cc);
            std::sort(m.begin(), m.end());
            out.push_back(std::move(m));
          }
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ClassSpec::is_member(const Support& set) const {
  // Membership via the consistency machinery would be circular in tests; use
  // direct structural checks.
  if (static_cast<int32_t>(set.size()) != support_size()) return false;
  for (Coord i : set)
    if (i < 1 || i > n) return false;
  switch (kind) {
    case ClassKind::SSet:
      return true;
    case ClassKind::SInterval: {
      for (size_t j = 1; j < set.size(); ++j)
        if (set[j] != set[j - 1] + 1) return false;
      return true;
    }
    case ClassKind::UnionIntervals: {
      // maximal blocks must have lengths that are multiples of s
      size_t i = 0;
      while (i < set.size()) {
        size_t j = i;
        while (j + 1 < set.size() && set[j + 1] == set[j] + 1) ++j;
        if ((j - i + 1) % static_cast<size_t>(s) != 0) return false;
        i = j + 1;
      }
      return true;
    }
    case ClassKind::SStar: {
      // all edges share one common vertex
      auto [a, b] = edge_vertices(p, set[0]);
      int32_t ca = a, cb = b;
      for (size_t j = 1; j < set.size(); ++j) {
        auto [u, v] = edge_vertices(p, set[j]);
        if (ca != u && ca != v) ca = 0;
        if (cb != u && cb != v) cb = 0;
        if (ca == 0 && cb == 0) return false;
      }
      return true;
    }
    case ClassKind::UnionStars: {
      // partition into k edge-disjoint s-stars: assign each edge to an
      // endpoint so every vertex receives a multiple of s (ceil-sum <= k).
      std::vector<std::pair<int32_t, int32_t>> ends;
      ends.reserve(set.size());
      for (Coord e : set) ends.push_back(edge_vertices(p, e));
      std::vector<int32_t> load(p + 1, 0);
      const int32_t kk = k, ss = s;
      auto ceil_stars = [&]() {
        int32_t tot = 0;
        for (int32_t v = 1; v <= p; ++v) tot += (load[v] + ss - 1) / ss;
        return tot;
      };
      std::function<bool(size_t)> rec = [&](size_t i) -> bool {
        if (ceil_stars() > kk) return false;
        if (i == ends.size()) {
          int32_t stars = 0;
          for (int32_t v = 1; v <= p; ++v) {
            if (load[v] % ss != 0) return false;
            stars += load[v] / ss;
          }
          return stars == kk;
        }
        for (int32_t v : {ends[i].first, ends[i].second}) {
          ++load[v];
          if (rec(i + 1)) {
            --load[v];
            return true;
          }
          --load[v];
        }
        return false;
      };
      return rec(0);
    }
    case ClassKind::Submatrix: {
      std::set<int32_t> rows, cols;
      for (Coord c : set) {
        rows.insert((c - 1) / n2 + 1);
        cols.insert((c - 1) % n2 + 1);
      }
      return rows.size() * cols.size() == set.size();
    }
  }
  return false;
}

bool check_symmetric(const std::vector<Support>& members, int32_t n) {
  if (members.empty()) throw std::invalid_argument("check_symmetric: empty class");
  const size_t sz = members.front().size();
  for (const auto& m : members)
    if (m.size() != sz)
      throw RefusalError("check_symmetric: members of unequal cardinality");
  std::vector<uint64_t> cover(static_cast<size_t>(n) + 1, 0);
  for (const auto& m : members)
    for (Coord i : m) {
      if (i < 1 || i > n) throw std::invalid_argument("check_symmetric: index out of range");
      ++cover[i];
    }
  // exact rational test: cover_i / |C| == s/n  <=>  cover_i * n == s * |C|
  const uint64_t rhs = static_cast<uint64_t>(sz) * members.size();
  for (int32_t i = 1; i <= n; ++i)
    if (cover[i] * static_cast<uint64_t>(n) != rhs) return false;
  return true;
}

bool check_symmetric(const ClassSpec& spec, uint64_t cap) {
  return check_symmetric(enumerate_class(spec, cap), spec.n);
}

}  // namespace asl
