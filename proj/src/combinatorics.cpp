#include "tensormp/combinatorics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <utility>

#include "tensormp/errors.hpp"

namespace tensormp {

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    __int128 acc = 1;
    for (int j = 1; j <= k; ++j) {
        acc = acc * (n - k + j) / j;
        if (acc > static_cast<__int128>(INT64_MAX)) throw DomainError("binomial overflows 64 bits");
    }
    return static_cast<std::int64_t>(acc);
}

std::int64_t narayana(int p, int s) {
    if (p < 1) throw DomainError("narayana requires p >= 1");
    if (s < 1 || s > p) return 0;
    __int128 prod = static_cast<__int128>(binomial(p, s - 1)) * binomial(p, s);
    prod /= p;  // always divides exactly
    if (prod > static_cast<__int128>(INT64_MAX)) throw DomainError("narayana overflows 64 bits");
    return static_cast<std::int64_t>(prod);
}

std::int64_t catalan(int p) {
    if (p < 0) throw DomainError("catalan requires p >= 0");
    if (p == 0) return 1;
    std::int64_t sum = 0;
    for (int s = 1; s <= p; ++s) sum += narayana(p, s);
    return sum;
}

CanonicalSequence CanonicalSequence::from(Sequence entries) {
    if (entries.empty()) throw DomainError("canonical sequence must be nonempty");
    if (entries.front() != 1) throw DomainError("canonical sequence must start at 1");
    int max_seen = 0;
    for (int v : entries) {
        if (v < 1) throw DomainError("canonical sequence entries must be positive");
        if (v > max_seen + 1) throw DomainError("canonical sequence entry exceeds running maximum + 1");
        max_seen = std::max(max_seen, v);
    }
    CanonicalSequence out;
    out.entries = std::move(entries);
    out.s = max_seen;
    return out;
}

int DegreeProfile::total() const {
    int t = 0;
    for (int d : deg) t += d;
    return t;
}

const char* delta_class_name(DeltaClass c) {
    switch (c) {
        case DeltaClass::D1: return "Delta1";
        case DeltaClass::D2: return "Delta2";
        case DeltaClass::D3: return "Delta3";
        case DeltaClass::D4: return "Delta4";
        case DeltaClass::D5: return "Delta5";
    }
    return "?";
}

namespace {

void extend_canonical(Sequence& prefix, int max_seen, int s, int p,
                      std::vector<CanonicalSequence>& out) {
    const int u = static_cast<int>(prefix.size());
    if (u == p) {
        if (max_seen == s) {
            CanonicalSequence cs;
            cs.entries = prefix;
            cs.s = s;
            out.push_back(std::move(cs));
        }
        return;
    }
    // Values still missing must fit into the remaining positions.
    if (s - max_seen > p - u) return;
    const int hi = std::min(max_seen + 1, s);
    for (int v = 1; v <= hi; ++v) {
        prefix.push_back(v);
        extend_canonical(prefix, std::max(max_seen, v), s, p, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<CanonicalSequence> enumerate_canonical(int s, int p) {
    if (p < 1 || s < 1 || s > p) throw DomainError("enumerate_canonical requires 1 <= s <= p");
    std::vector<CanonicalSequence> out;
    Sequence prefix{1};
    extend_canonical(prefix, 1, s, p, out);
    return out;
}

std::vector<CanonicalSequence> enumerate_all_canonical(int p) {
    std::vector<CanonicalSequence> out;
    for (int s = 1; s <= p; ++s) {
        auto part = enumerate_canonical(s, p);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

DegreeProfile degree_profile(const CanonicalSequence& alpha) {
    DegreeProfile profile;
    profile.deg.assign(alpha.s, 0);
    for (int v : alpha.entries) ++profile.deg[v - 1];
    return profile;
}

WalkGraph build_walk_graph(const Sequence& i_seq, const CanonicalSequence& alpha) {
    const int p = alpha.length();
    if (static_cast<int>(i_seq.size()) != p)
        throw DomainError("i-sequence and alpha must have the same length");
    if (p == 0) throw DomainError("walk graph needs length >= 1");

    WalkGraph g;
    g.alpha = alpha;
    g.i_seq = i_seq;
    g.down_edges.reserve(p);
    g.up_edges.reserve(p);

    std::vector<int> seen_i, seen_alpha;
    seen_alpha.push_back(alpha.entries[0]);
    for (int u = 0; u < p; ++u) {
        const int iv = i_seq[u];
        const bool down_innov = std::find(seen_i.begin(), seen_i.end(), iv) == seen_i.end();
        if (down_innov) seen_i.push_back(iv);
        g.down_edges.push_back({alpha.entries[u], iv, down_innov});

        const int next_alpha = (u + 1 < p) ? alpha.entries[u + 1] : alpha.entries[0];
        const bool up_innov =
            std::find(seen_alpha.begin(), seen_alpha.end(), next_alpha) == seen_alpha.end();
        if (up_innov) seen_alpha.push_back(next_alpha);
        g.up_edges.push_back({next_alpha, iv, up_innov});
    }
    g.r = static_cast<int>(seen_i.size());
    g.delta_class = classify(g);
    return g;
}

DeltaClass classify(const WalkGraph& graph) {
    const int p = static_cast<int>(graph.down_edges.size());

    // Multiplicities per vertex pair (alpha value, i value).
    std::map<std::pair<int, int>, std::pair<int, int>> groups;  // -> (downs, ups)
    for (const auto& e : graph.down_edges) ++groups[{e.alpha_vertex, e.i_vertex}].first;
    for (const auto& e : graph.up_edges) ++groups[{e.alpha_vertex, e.i_vertex}].second;

    bool all_mult_two = true;
    bool all_down_up_paired = true;
    int doubled_sites = 0;   // groups with two downs and two ups
    int stray_groups = 0;    // anything that is neither (1,1) nor (2,2)
    for (const auto& [key, mult] : groups) {
        const int total = mult.first + mult.second;
        if (total == 1) return DeltaClass::D2;
        if (total != 2) all_mult_two = false;
        if (mult.first == 1 && mult.second == 1) continue;
        all_down_up_paired = false;
        if (mult.first == 2 && mult.second == 2)
            ++doubled_sites;
        else
            ++stray_groups;
    }

    const int vertices = graph.alpha.s + graph.r;
    if (all_mult_two) {
        // p glued edges on a connected graph: tree iff V = p+1, one cycle iff V = p.
        if (all_down_up_paired && vertices == p + 1) return DeltaClass::D1;
        if (vertices == p) return DeltaClass::D3;
        return DeltaClass::D5;
    }
    // One doubled site, everything else in down/up pairs: p-1 glued edges,
    // a tree iff V = p.
    if (doubled_sites == 1 && stray_groups == 0 && vertices == p) return DeltaClass::D4;
    return DeltaClass::D5;
}

CharacteristicPair characteristic_pair(const CanonicalSequence& alpha) {
    const int p = alpha.length();
    CharacteristicPair pair;
    pair.u.assign(p, 0);
    pair.d.assign(p, 0);

    int run_max = alpha.entries[0];
    for (int l = 1; l <= p; ++l) {
        const int next = (l < p) ? alpha.entries[l] : alpha.entries[0];
        if (next == run_max + 1) pair.u[l - 1] = 1;
        run_max = std::max(run_max, next);
    }
    for (int l = 1; l <= p; ++l) {
        const int v = alpha.entries[l - 1];
        if (v == 1) continue;
        bool appears_later = false;
        for (int j = l; j < p; ++j)
            if (alpha.entries[j] == v) appears_later = true;
        if (!appears_later) pair.d[l - 1] = -1;
    }
    return pair;
}

bool ballot_condition(const CharacteristicPair& pair) {
    const int p = pair.length();
    if (static_cast<int>(pair.d.size()) != p) throw DomainError("u and d must have equal length");
    int sum = 0;
    for (int l = 2; l <= p; ++l) {
        sum += pair.u[l - 2];  // u_{l-1}
        sum += pair.d[l - 1];  // d_l
        if (sum < 0) return false;
    }
    return true;
}

Delta1Reconstruction reconstruct_delta1(const CharacteristicPair& pair) {
    const int p = pair.length();
    if (p < 1) throw DomainError("empty characteristic pair");
    if (static_cast<int>(pair.d.size()) != p) throw DomainError("u and d must have equal length");
    if (pair.u[p - 1] != 0 || pair.d[0] != 0)
        throw DomainError("characteristic pair must have u_p = 0 and d_1 = 0");
    int ones = 0, minus = 0;
    for (int l = 0; l < p; ++l) {
        if (pair.u[l] != 0 && pair.u[l] != 1) throw DomainError("u entries must be 0 or 1");
        if (pair.d[l] != 0 && pair.d[l] != -1) throw DomainError("d entries must be 0 or -1");
        ones += pair.u[l];
        minus -= pair.d[l];
    }
    if (ones != minus) throw DomainError("unbalanced characteristic pair");
    if (!ballot_condition(pair)) throw DomainError("characteristic pair violates the ballot condition");

    // Walk state. The open chain holds the single (still unpaired) innovation
    // edges; it always alternates down,up,... from the bottom, so its top is
    // an up edge whenever it is nonempty.
    struct OpenEdge {
        bool is_up;
        int alpha_vertex;
        int i_vertex;
    };
    std::vector<OpenEdge> chain;

    Sequence alpha{1};
    Sequence i_seq;
    alpha.reserve(p + 1);
    i_seq.reserve(p);
    int current = 1;     // alpha-vertex the walk sits on before step l
    int next_i = 1;      // next fresh i-vertex label
    int next_alpha = 2;  // next fresh alpha-vertex label

    for (int l = 0; l < p; ++l) {
        const bool down_closes = pair.d[l] == -1;
        const bool up_opens = pair.u[l] == 1;
        int iv;
        if (!down_closes) {
            // Down innovation to a fresh i-vertex.
            iv = next_i++;
            if (up_opens) {
                // Case 1: both edges innovate; leave both open.
                chain.push_back({false, current, iv});
                const int av = next_alpha++;
                chain.push_back({true, av, iv});
                current = av;
            } else {
                // Case 2: the up edge returns along the down edge just drawn.
            }
        } else {
            // Cases 3 and 4: the down edge closes the open up innovation into
            // the current vertex.
            iv = chain.back().i_vertex;
            chain.pop_back();
            if (up_opens) {
                // Case 3: fresh up innovation out of the same i-vertex.
                const int av = next_alpha++;
                chain.push_back({true, av, iv});
                current = av;
            } else {
                // Case 4: the up edge closes the open down innovation below.
                current = chain.back().alpha_vertex;
                chain.pop_back();
            }
        }
        i_seq.push_back(iv);
        if (l + 1 < p) alpha.push_back(current);
    }
    if (!chain.empty() || current != 1)
        throw DomainError("characteristic pair does not close the walk");

    Delta1Reconstruction out;
    out.alpha = CanonicalSequence::from(std::move(alpha));
    out.i_seq = std::move(i_seq);
    return out;
}

std::optional<Sequence> class_one_witness(const CanonicalSequence& alpha) {
    const auto pair = characteristic_pair(alpha);
    if (!ballot_condition(pair)) return std::nullopt;
    const auto rebuilt = reconstruct_delta1(pair);
    if (rebuilt.alpha != alpha) return std::nullopt;
    return rebuilt.i_seq;
}

namespace {

// Depth-first enumeration of balanced ballot pairs. Every such pair encodes
// one tree walk; its alpha-sequence is class one, and distinct pairs give
// distinct alphas, so reconstruction yields each class-one sequence once.
void visit_ballot_pairs(int p, CharacteristicPair& pair, int l, int open,
                        const std::function<void(const CharacteristicPair&)>& emit) {
    if (l == p) {
        if (open == 0) emit(pair);
        return;
    }
    static constexpr int kChoices[4][2] = {{0, 0}, {0, 1}, {-1, 0}, {-1, 1}};
    for (const auto& [dl, ul] : kChoices) {
        if (l == 0 && dl == -1) continue;      // d_1 = 0
        if (l == p - 1 && ul == 1) continue;   // u_p = 0
        if (dl == -1 && open < 1) continue;    // nothing open to close
        const int next_open = open + ul + dl;
        if (next_open > p - l - 1) continue;   // cannot close everything in time
        pair.d[l] = dl;
        pair.u[l] = ul;
        visit_ballot_pairs(p, pair, l + 1, next_open, emit);
    }
    pair.d[l] = 0;
    pair.u[l] = 0;
}

std::vector<CanonicalSequence> class_one_by_reconstruction(int p, int wanted_s) {
    std::vector<CanonicalSequence> out;
    CharacteristicPair pair;
    pair.u.assign(p, 0);
    pair.d.assign(p, 0);
    visit_ballot_pairs(p, pair, 0, 0, [&](const CharacteristicPair& complete) {
        auto rebuilt = reconstruct_delta1(complete);
        if (wanted_s == 0 || rebuilt.alpha.s == wanted_s)
            out.push_back(std::move(rebuilt.alpha));
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<CanonicalSequence> enumerate_class_one(int s, int p) {
    if (p < 1 || s < 1 || s > p) throw DomainError("enumerate_class_one requires 1 <= s <= p");
    return class_one_by_reconstruction(p, s);
}

std::vector<CanonicalSequence> enumerate_class_one_all(int p) {
    if (p < 1) throw DomainError("enumerate_class_one_all requires p >= 1");
    return class_one_by_reconstruction(p, 0);
}

bool has_crossing_pattern(const CanonicalSequence& alpha) {
    const auto& a = alpha.entries;
    const int p = alpha.length();
    for (int j1 = 0; j1 < p; ++j1)
        for (int j2 = j1 + 1; j2 < p; ++j2) {
            if (a[j2] == a[j1]) continue;
            for (int j1p = j2 + 1; j1p < p; ++j1p) {
                if (a[j1p] != a[j1]) continue;
                for (int j2p = j1p + 1; j2p < p; ++j2p)
                    if (a[j2p] == a[j2]) return true;
            }
        }
    return false;
}

namespace {

int count_class_bruteforce(const CanonicalSequence& alpha, DeltaClass wanted) {
    int count = 0;
    for (const auto& i_seq : enumerate_all_canonical(alpha.length()))
        if (build_walk_graph(i_seq.entries, alpha).delta_class == wanted) ++count;
    return count;
}

}  // namespace

int count_delta1_bruteforce(const CanonicalSequence& alpha) {
    return count_class_bruteforce(alpha, DeltaClass::D1);
}

int count_delta3_bruteforce(const CanonicalSequence& alpha) {
    return count_class_bruteforce(alpha, DeltaClass::D3);
}

int count_delta4_bruteforce(const CanonicalSequence& alpha) {
    return count_class_bruteforce(alpha, DeltaClass::D4);
}

namespace {

int delta4_sites(const CanonicalSequence& alpha) {
    int sum = 0;
    for (int d : degree_profile(alpha).deg) sum += static_cast<int>(binomial(d, 2));
    return sum;
}

void require_class_one(const CanonicalSequence& alpha, const char* where) {
    if (!class_one_witness(alpha))
        throw DomainError(std::string(where) + " requires a class-one sequence");
}

}  // namespace

int delta3_count_formula(const CanonicalSequence& alpha) {
    require_class_one(alpha, "delta3_count_formula");
    const int p = alpha.length();
    return static_cast<int>(binomial(p + 1 - alpha.s, 2)) - delta4_sites(alpha);
}

int delta4_count_formula(const CanonicalSequence& alpha) {
    require_class_one(alpha, "delta4_count_formula");
    return delta4_sites(alpha);
}

}  // namespace tensormp
