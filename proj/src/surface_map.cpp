#include "flowcob/surface_map.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace flowcob {

namespace {

bool is_permutation_of_range(const Perm& p) {
    std::vector<char> seen(p.size(), 0);
    for (int v : p) {
        if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

std::vector<std::vector<Dart>> orbit_table(const Perm& p, std::vector<int>& id_of) {
    const int n = static_cast<int>(p.size());
    id_of.assign(n, -1);
    std::vector<std::vector<Dart>> orbits;
    for (Dart s = 0; s < n; ++s) {
        if (id_of[s] >= 0) continue;
        const int id = static_cast<int>(orbits.size());
        std::vector<Dart> cyc;
        Dart x = s;
        while (id_of[x] < 0) {
            id_of[x] = id;
            cyc.push_back(x);
            x = p[x];
        }
        orbits.push_back(std::move(cyc));
    }
    return orbits;
}

}  // namespace

CombinatorialMap CombinatorialMap::build(const Perm& alpha, const Perm& sigma,
                                         int isolated_vertices) {
    if (alpha.size() != sigma.size())
        throw Error(Errc::SizeMismatch, "alpha and sigma act on different dart sets");
    const int n = static_cast<int>(alpha.size());
    if (n % 2 != 0) throw Error(Errc::SizeMismatch, "odd number of darts");
    if (!is_permutation_of_range(alpha))
        throw Error(Errc::SizeMismatch, "alpha is not a permutation of 0..n_darts-1");
    if (!is_permutation_of_range(sigma))
        throw Error(Errc::SizeMismatch, "sigma is not a permutation of 0..n_darts-1");
    for (Dart d = 0; d < n; ++d) {
        if (alpha[d] == d) throw Error(Errc::FixedPointInAlpha, "alpha fixes dart " + std::to_string(d));
        if (alpha[alpha[d]] != d) throw Error(Errc::NotInvolution, "alpha is not an involution");
    }
    if (isolated_vertices < 0)
        throw Error(Errc::SizeMismatch, "negative isolated vertex count");

    // Single component only.  Isolated vertices cannot coexist with darts,
    // and the dartless map is exactly one vertex.
    if (n == 0) {
        if (isolated_vertices != 1)
            throw Error(Errc::Disconnected, "dartless map must consist of exactly one vertex");
    } else {
        if (isolated_vertices != 0)
            throw Error(Errc::Disconnected, "isolated vertex alongside darts");
        std::vector<char> seen(n, 0);
        std::vector<Dart> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            Dart x = stack.back();
            stack.pop_back();
            for (Dart y : {alpha[x], sigma[x]}) {
                if (!seen[y]) {
                    seen[y] = 1;
                    ++reached;
                    stack.push_back(y);
                }
            }
        }
        if (reached != n) throw Error(Errc::Disconnected, "rotation system is not connected");
    }

    // Renumber so edge i owns darts 2i, 2i+1 (pairs ordered by smaller dart).
    std::vector<int> relab(n, -1);
    {
        int next = 0;
        for (Dart d = 0; d < n; ++d) {
            if (relab[d] >= 0) continue;
            relab[d] = next++;
            relab[alpha[d]] = next++;
        }
    }

    CombinatorialMap m;
    m.n_darts_ = n;
    m.isolated_vertices_ = isolated_vertices;
    m.alpha_.resize(n);
    m.sigma_.resize(n);
    m.sigma_inv_.resize(n);
    for (Dart d = 0; d < n; ++d) {
        m.alpha_[relab[d]] = relab[alpha[d]];
        m.sigma_[relab[d]] = relab[sigma[d]];
    }
    for (Dart d = 0; d < n; ++d) m.sigma_inv_[m.sigma_[d]] = d;

    m.vertices_ = orbit_table(m.sigma_, m.vertex_of_);
    Perm phi(n);
    for (Dart d = 0; d < n; ++d) phi[d] = m.sigma_[m.alpha_[d]];
    m.faces_ = orbit_table(phi, m.face_of_);
    if (n == 0) {
        m.vertices_.push_back({});
        m.faces_.push_back({});
    }

    const int v = m.vertex_count(), e = m.edge_count(), f = m.face_count();
    const int chi = v - e + f;
    if ((2 - chi) % 2 != 0 || chi > 2)
        throw Error(Errc::SizeMismatch, "Euler characteristic is not of the form 2-2g");
    m.genus_ = (2 - chi) / 2;
    return m;
}

bool DartBijection::conjugates(const CombinatorialMap& a, const CombinatorialMap& b) const {
    const int n = a.n_darts();
    if (n != b.n_darts() || static_cast<int>(image.size()) != n) return false;
    if (a.isolated_vertices() != b.isolated_vertices()) return false;
    std::vector<char> hit(n, 0);
    for (Dart d = 0; d < n; ++d) {
        Dart f = image[d];
        if (f < 0 || f >= n || hit[f]) return false;
        hit[f] = 1;
    }
    for (Dart d = 0; d < n; ++d) {
        if (image[a.alpha(d)] != b.alpha(image[d])) return false;
        if (image[a.sigma(d)] != b.sigma(image[d])) return false;
    }
    return true;
}

CombinatorialMap dual_map(const CombinatorialMap& m) {
    const int n = m.n_darts();
    Perm phi(n);
    for (Dart d = 0; d < n; ++d) phi[d] = m.phi(d);
    return CombinatorialMap::build(m.alpha_perm(), phi, m.isolated_vertices());
}

namespace detail {

std::vector<int> anchor_relabeling(const CombinatorialMap& m, Dart anchor) {
    const int n = m.n_darts();
    std::vector<int> relab(n, -1);
    std::vector<Dart> order;
    order.reserve(n);
    relab[anchor] = 0;
    order.push_back(anchor);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        Dart x = order[qi];
        for (Dart y : {m.sigma(x), m.alpha(x)}) {
            if (relab[y] < 0) {
                relab[y] = static_cast<int>(order.size());
                order.push_back(y);
            }
        }
    }
    return relab;
}

std::vector<int> canonical_relabeling(const CombinatorialMap& m, Dart anchor) {
    const int n = m.n_darts();
    std::vector<int> bfs = anchor_relabeling(m, anchor);
    std::vector<Dart> by_bfs(n);
    for (Dart d = 0; d < n; ++d) by_bfs[bfs[d]] = d;
    std::vector<int> tau(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        Dart d = by_bfs[i];
        if (tau[d] >= 0) continue;
        tau[d] = next++;
        tau[m.alpha(d)] = next++;
    }
    return tau;
}

}  // namespace detail

std::optional<DartBijection> map_isomorphic(const CombinatorialMap& a, const CombinatorialMap& b) {
    const int n = a.n_darts();
    if (n != b.n_darts() || a.isolated_vertices() != b.isolated_vertices()) return std::nullopt;
    if (a.vertex_count() != b.vertex_count() || a.face_count() != b.face_count()) return std::nullopt;
    if (n == 0) return DartBijection{{}};

    for (Dart anchor = 0; anchor < n; ++anchor) {
        std::vector<int> image(n, -1);
        std::vector<Dart> order;
        image[0] = anchor;
        order.push_back(0);
        bool ok = true;
        for (std::size_t qi = 0; qi < order.size() && ok; ++qi) {
            Dart x = order[qi];
            const Dart pairs[2][2] = {{a.sigma(x), b.sigma(image[x])},
                                      {a.alpha(x), b.alpha(image[x])}};
            for (auto& pr : pairs) {
                Dart y = pr[0], fy = pr[1];
                if (image[y] < 0) {
                    image[y] = fy;
                    order.push_back(y);
                } else if (image[y] != fy) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;
        DartBijection bij{std::move(image)};
        if (bij.conjugates(a, b)) return bij;
    }
    return std::nullopt;
}

namespace {

std::string encode(int n, int isolated, const Perm& sigma, const Perm& alpha) {
    std::ostringstream os;
    os << "M:n=" << n << ",k=" << isolated << ";s=";
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << sigma[i];
    os << ";a=";
    for (int i = 0; i < n; ++i) os << (i ? "," : "") << alpha[i];
    return os.str();
}

}  // namespace

std::string canonical_form(const CombinatorialMap& m) {
    const int n = m.n_darts();
    if (n == 0) return encode(0, m.isolated_vertices(), {}, {});

    std::vector<int> best_s, best_a;
    for (Dart anchor = 0; anchor < n; ++anchor) {
        std::vector<int> tau = detail::canonical_relabeling(m, anchor);
        std::vector<int> s(n), a(n);
        for (Dart d = 0; d < n; ++d) {
            s[tau[d]] = tau[m.sigma(d)];
            a[tau[d]] = tau[m.alpha(d)];
        }
        if (best_s.empty() || std::tie(s, a) < std::tie(best_s, best_a)) {
            best_s = std::move(s);
            best_a = std::move(a);
        }
    }
    return encode(n, 0, best_s, best_a);
}

CombinatorialMap decode_map(const std::string& form) {
    auto fail = [&]() -> Error { return Error(Errc::ParseError, "bad map form: " + form); };
    auto read_int = [&](std::size_t& pos) {
        int value = 0;
        auto [p, ec] = std::from_chars(form.data() + pos, form.data() + form.size(), value);
        if (ec != std::errc()) throw fail();
        pos = static_cast<std::size_t>(p - form.data());
        return value;
    };
    auto expect = [&](std::size_t& pos, const char* lit) {
        std::size_t len = std::string::traits_type::length(lit);
        if (form.compare(pos, len, lit) != 0) throw fail();
        pos += len;
    };
    std::size_t pos = 0;
    expect(pos, "M:n=");
    const int n = read_int(pos);
    expect(pos, ",k=");
    const int isolated = read_int(pos);
    expect(pos, ";s=");
    if (n < 0) throw fail();
    Perm sigma, alpha;
    for (int i = 0; i < n; ++i) {
        if (i) expect(pos, ",");
        sigma.push_back(read_int(pos));
    }
    expect(pos, ";a=");
    for (int i = 0; i < n; ++i) {
        if (i) expect(pos, ",");
        alpha.push_back(read_int(pos));
    }
    if (pos != form.size()) throw fail();
    return CombinatorialMap::build(alpha, sigma, isolated);
}

}  // namespace flowcob
