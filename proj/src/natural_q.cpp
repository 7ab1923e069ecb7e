#include "tractorkit/natural_q.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tk {

int NaturalQInput::N() const { return std::accumulate(partition.begin(), partition.end(), 0); }

NaturalQInput NaturalQInput::standard(int n) {
  NaturalQInput in;
  if (n % 2 == 0) {
    in.partition = {n / 2};
    in.F = {std::vector<int>(static_cast<std::size_t>(n), 1)};
  } else {
    in.partition = {n};
    std::vector<int> f(static_cast<std::size_t>(2 * n), 1);
    std::fill(f.begin(), f.begin() + n, 2);
    in.F = {f};
  }
  return in;
}

NaturalQInput NaturalQInput::primed() const {
  if (partition.empty() || partition[0] < 1 || F.empty() || F[0].size() < 2)
    throw PreconditionViolation("natural Q inputs: chain 0 is empty, nothing to prime");
  NaturalQInput p = *this;
  p.R = R + 2;
  --p.partition[0];
  p.F[0].resize(p.F[0].size() - 2);
  return p;
}

std::string NaturalQInput::describe() const {
  std::ostringstream os;
  os << "R=" << R << " N=(";
  for (std::size_t j = 0; j < partition.size(); ++j) os << (j ? "," : "") << partition[j];
  os << ") F=";
  for (std::size_t j = 0; j < F.size(); ++j) {
    os << (j ? "|" : "");
    for (int f : F[j]) os << f;
  }
  return os.str();
}

std::string natural_q_violation(int n, const NaturalQInput& in) {
  if (n < 2) return "dimension must be at least 2";
  if (in.R < 0 || in.R >= n) return "R must satisfy 0 <= R < n";
  if (in.partition.empty()) return "the partition is empty";
  if (in.F.size() != in.partition.size()) return "F needs one list per part of the partition";
  for (std::size_t j = 0; j < in.partition.size(); ++j) {
    if (in.partition[j] < 0) return "partition parts must be non-negative";
    if (j > 0 && in.partition[j] < 1) return "parts after the first must be positive";
    if (static_cast<int>(in.F[j].size()) != 2 * in.partition[j]) return "F list " + std::to_string(j) + " must have 2 N_j entries";
  }
  const int total = 2 * in.N() + in.R;
  if (total == 0 || total % n != 0) return "2N + R must be a positive multiple of n";
  const int K = total / n;
  std::vector<int> count(static_cast<std::size_t>(K + 1), 0);
  for (const auto& fj : in.F)
    for (int f : fj) {
      if (f < 1 || f > K) return "F values must lie in 1.." + std::to_string(K);
      ++count[static_cast<std::size_t>(f)];
    }
  if (count[1] != n - in.R) return "group 1 must hold n - R indices";
  for (int i = 2; i <= K; ++i)
    if (count[static_cast<std::size_t>(i)] != n) return "group " + std::to_string(i) + " must hold n indices";
  return {};
}

namespace {

template <class T>
JetMatrix<T> pair_matrix(const Tensor<T>& W, int a, int b) {
  const int n = W.dim();
  JetMatrix<T> M(n, n);
  for (int c = 0; c < n; ++c)
    for (int d = 0; d < n; ++d) M(c, d) = W(a, b, c, d);
  return M;
}

struct Group {
  std::vector<int> positions;
};

}  // namespace

template <class T>
Tensor<T> natural_Q(const Tensor<T>& W, const NaturalQInput& in) {
  const int n = W.dim();
  if (W.slots() != std::vector<Slot>{{Variance::Down, n}, {Variance::Down, n}, {Variance::Up, n}, {Variance::Down, n}})
    throw DimensionMismatch("natural Q needs a Weyl-type tensor W_{ab}^c_d");
  if (const std::string why = natural_q_violation(n, in); !why.empty())
    throw PreconditionViolation("natural Q inputs (" + in.describe() + "): " + why);
  const int K = in.groups(n);

  // Flattened chain positions in lexicographic (j, alpha) order.
  std::vector<int> chain_start;
  std::vector<Group> groups(static_cast<std::size_t>(K + 1));
  int pos = 0;
  for (std::size_t j = 0; j < in.F.size(); ++j) {
    chain_start.push_back(pos);
    for (int f : in.F[j]) groups[static_cast<std::size_t>(f)].positions.push_back(pos++);
  }
  const int npos = pos;

  std::vector<JetMatrix<T>> mats(static_cast<std::size_t>(n * n));
  std::vector<bool> zero(static_cast<std::size_t>(n * n), true);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) {
        mats[static_cast<std::size_t>(a * n + b)] = pair_matrix(W, a, b);
        zero[static_cast<std::size_t>(a * n + b)] = mats[static_cast<std::size_t>(a * n + b)].is_zero();
      }

  std::vector<Slot> slots(static_cast<std::size_t>(in.R), Slot{Variance::Up, n});
  slots.push_back({Variance::Down, n});
  slots.push_back({Variance::Up, n});
  Tensor<T> Q(n, slots, K * (n + 1));
  Q.set_point(W.point());

  std::vector<int> value(static_cast<std::size_t>(npos), 0);
  const std::vector<int> bext(static_cast<std::size_t>(in.R), n);
  const JetMatrix<T> id = JetMatrix<T>::identity(n);

  auto accumulate_term = [&](int sign, std::span<const int> b) {
    // chain products; every pair must be a nonzero matrix
    JetMatrix<T> chain0 = id;
    Jet<T> scalar(T(1));
    for (std::size_t j = 0; j < in.F.size(); ++j) {
      const int start = chain_start[j];
      const int len = static_cast<int>(in.F[j].size());
      if (len == 0) continue;
      JetMatrix<T> acc;
      for (int i = 0; i < len; i += 2) {
        const int a = value[static_cast<std::size_t>(start + i)], c = value[static_cast<std::size_t>(start + i + 1)];
        if (a == c || zero[static_cast<std::size_t>(a * n + c)]) return;
        const JetMatrix<T>& M = mats[static_cast<std::size_t>(a * n + c)];
        acc = i == 0 ? M : M * acc;
      }
      if (j == 0) {
        chain0 = std::move(acc);
      } else {
        Jet<T> tr;
        for (int c = 0; c < n; ++c) tr += acc(c, c);
        if (tr.is_zero()) return;
        scalar = scalar * tr;
      }
    }
    std::vector<int> idx(b.begin(), b.end());
    idx.push_back(0);
    idx.push_back(0);
    for (int t = 0; t < n; ++t)
      for (int s = 0; s < n; ++s) {
        const Jet<T>& e = chain0(s, t);
        if (e.is_zero()) continue;
        idx[static_cast<std::size_t>(in.R)] = t;
        idx[static_cast<std::size_t>(in.R + 1)] = s;
        Jet<T>& dst = Q.at(idx);
        if (sign > 0)
          dst += e * scalar;
        else
          dst -= e * scalar;
      }
  };

  auto run_groups = [&](std::span<const int> b, int b_sign) {
    // candidate value lists per group
    std::vector<std::vector<int>> cand(static_cast<std::size_t>(K + 1));
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    for (int g = 2; g <= K; ++g) cand[static_cast<std::size_t>(g)] = all;
    for (int v = 0; v < n; ++v)
      if (std::find(b.begin(), b.end(), v) == b.end()) cand[1].push_back(v);
    auto rec = [&](auto&& self, int g, int sign) -> void {
      if (g > K) {
        accumulate_term(sign, b);
        return;
      }
      std::vector<int> perm = cand[static_cast<std::size_t>(g)];
      const auto& ps = groups[static_cast<std::size_t>(g)].positions;
      do {
        std::vector<int> full(perm);
        if (g == 1) full.insert(full.end(), b.begin(), b.end());
        const int s = permutation_sign(full);
        for (std::size_t i = 0; i < ps.size(); ++i) value[static_cast<std::size_t>(ps[i])] = perm[i];
        self(self, g + 1, sign * s);
      } while (std::next_permutation(perm.begin(), perm.end()));
    };
    rec(rec, 1, b_sign);
  };

  if (in.R == 0) {
    run_groups({}, 1);
  } else {
    for_each_index(std::span<const int>(bext), [&](std::span<const int> b) {
      std::vector<int> sorted(b.begin(), b.end());
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return;
      run_groups(b, 1);
    });
  }
  return Q;
}

template <class T>
NaturalLeftInverse<T> natural_left_inverse(const Tensor<T>& W, const NaturalQInput& in, double tol) {
  const int n = W.dim();
  if (in.R != 0) throw PreconditionViolation("a natural left inverse needs inputs with R = 0");
  if (in.partition.empty() || in.partition[0] < 1) throw PreconditionViolation("a natural left inverse needs N_0 >= 1");
  const auto& f0 = in.F[0];
  if (f0.size() < 2 || f0[f0.size() - 1] != 1 || f0[f0.size() - 2] != 1)
    throw PreconditionViolation("the last two indices of chain 0 must lie in group 1");
  NaturalLeftInverse<T> out;
  out.Q = natural_Q(W, in);
  out.Qprime = natural_Q(W, in.primed());

  JetMatrix<T> M(n, n, out.Q.weight());
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) M(r, j) = out.Q(r, j);
  const DetAdj<T> da = det_adj(M);
  out.norm = da.det;
  const double dv = std::abs(RingTraits<T>::to_double(da.det.value()));
  bool degenerate = RingTraits<T>::is_zero(da.det.value());
  if constexpr (!RingTraits<T>::exact) {
    double qmax = 0.0;
    for (int r = 0; r < n; ++r)
      for (int j = 0; j < n; ++j) qmax = std::max(qmax, std::abs(out.Q(r, j).value()));
    degenerate = degenerate || dv <= tol * std::pow(qmax, n);
  } else {
    (void)tol;
  }
  if (degenerate) throw GenericityFailure("||Q|| vanishes at the point for " + in.describe());

  const Jet<T> inv = da.det.reciprocal();
  out.D = Tensor<T>(n, {{Variance::Up, n}, {Variance::Up, n}, {Variance::Down, n}, {Variance::Up, n}},
                    out.Qprime.weight() - out.Q.weight());
  out.D.set_point(W.point());
  for (int b1 = 0; b1 < n; ++b1)
    for (int b2 = 0; b2 < n; ++b2) {
      if (b1 == b2) continue;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          Jet<T> acc;
          for (int r = 0; r < n; ++r) {
            const Jet<T>& q = out.Qprime(b1, b2, r, k);
            if (!q.is_zero() && !da.adj(i, r).is_zero()) acc += da.adj(i, r) * q;
          }
          if (!acc.is_zero()) out.D(b1, b2, i, k) = acc * inv;
        }
    }
  return out;
}

template Tensor<Rational> natural_Q(const Tensor<Rational>&, const NaturalQInput&);
template Tensor<double> natural_Q(const Tensor<double>&, const NaturalQInput&);
template NaturalLeftInverse<Rational> natural_left_inverse(const Tensor<Rational>&, const NaturalQInput&, double);
template NaturalLeftInverse<double> natural_left_inverse(const Tensor<double>&, const NaturalQInput&, double);

}  // namespace tk
