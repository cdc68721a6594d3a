#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace tensormp {

/// Integer sequence with 1-based positive entries, e.g. (1,2,1,2).
using Sequence = std::vector<int>;

std::int64_t binomial(int n, int k);
std::int64_t narayana(int p, int s);  // (1/p) C(p,s-1) C(p,s)
std::int64_t catalan(int p);

/// A length-p sequence with entries[0] = 1 whose every entry exceeds the
/// running maximum by at most one. Distinct values are exactly {1,...,s},
/// so a canonical sequence is a representative of a set partition of [p]
/// into s blocks.
struct CanonicalSequence {
    Sequence entries;
    int s = 0;

    static CanonicalSequence from(Sequence entries);

    int length() const { return static_cast<int>(entries.size()); }
    auto operator<=>(const CanonicalSequence&) const = default;
};

/// deg[t-1] = number of positions holding value t, for t in [s].
struct DegreeProfile {
    std::vector<int> deg;

    int total() const;
    auto operator<=>(const DegreeProfile&) const = default;
};

enum class DeltaClass { D1 = 1, D2 = 2, D3 = 3, D4 = 4, D5 = 5 };

const char* delta_class_name(DeltaClass c);

struct WalkEdge {
    int alpha_vertex = 0;
    int i_vertex = 0;
    bool innovation = false;
};

/// The closed-walk multigraph of a trace term: p down edges alpha_u -> i^(u)
/// and p up edges i^(u) -> alpha_{u+1}, with alpha_{p+1} = alpha_1.
struct WalkGraph {
    CanonicalSequence alpha;
    Sequence i_seq;
    std::vector<WalkEdge> down_edges;
    std::vector<WalkEdge> up_edges;
    DeltaClass delta_class = DeltaClass::D5;
    int r = 0;  // distinct i-vertices
};

/// Per-position innovation record of a canonical sequence:
///   u[l-1] = 1 iff alpha_{l+1} opens a new value (new running maximum),
///   d[l-1] = -1 iff alpha_l is not 1 and never appears again.
/// u ends in 0 and d starts with 0 by construction.
struct CharacteristicPair {
    std::vector<int> u;
    std::vector<int> d;

    int length() const { return static_cast<int>(u.size()); }
    auto operator<=>(const CharacteristicPair&) const = default;
};

struct Delta1Reconstruction {
    CanonicalSequence alpha;
    Sequence i_seq;
};

/// All canonical s-sequences of length p in lexicographic order.
/// Count equals the Stirling partition number S(p,s).
std::vector<CanonicalSequence> enumerate_canonical(int s, int p);

/// All canonical sequences of length p (every s), lexicographic per s.
std::vector<CanonicalSequence> enumerate_all_canonical(int p);

DegreeProfile degree_profile(const CanonicalSequence& alpha);

WalkGraph build_walk_graph(const Sequence& i_seq, const CanonicalSequence& alpha);

/// Assigns exactly one class. Tested in order: a lone edge anywhere makes
/// the graph D2; perfectly down/up paired edges glue to a tree (D1) or to a
/// unicyclic graph (D3); a single doubled down/up site with all other edges
/// paired and a glued tree is D4; everything else is D5. A graph with two
/// distinct doubled sites therefore falls to D5.
DeltaClass classify(const WalkGraph& graph);

CharacteristicPair characteristic_pair(const CanonicalSequence& alpha);

/// Partial-sum condition u_1+...+u_{l-1} + d_2+...+d_l >= 0 for 2 <= l <= p.
bool ballot_condition(const CharacteristicPair& pair);

/// Rebuilds the unique perfectly-paired tree walk encoded by a balanced
/// ballot pair and returns its alpha- and i-sequences.
Delta1Reconstruction reconstruct_delta1(const CharacteristicPair& pair);

/// The unique i-sequence whose walk graph with alpha is D1, if it exists:
/// reconstruct from alpha's characteristic pair and accept only when the
/// round trip returns alpha itself.
std::optional<Sequence> class_one_witness(const CanonicalSequence& alpha);

/// Canonical s-sequences of length p admitting a D1 witness. Cardinality is
/// the Narayana number (1/p) C(p,s-1) C(p,s). Generated by walking every
/// balanced ballot pair through the reconstruction rather than filtering all
/// canonical sequences, so the cost scales with the Catalan numbers.
std::vector<CanonicalSequence> enumerate_class_one(int s, int p);

/// The whole class-one family of length p (every s), lexicographic.
std::vector<CanonicalSequence> enumerate_class_one_all(int p);

/// True iff two values interleave as t1 t2 t1 t2 at positions
/// j1 < j2 < j1' < j2'. Such a sequence admits no D1 witness.
bool has_crossing_pattern(const CanonicalSequence& alpha);

/// Exhaustive counts over all canonical i-sequences of length p.
int count_delta1_bruteforce(const CanonicalSequence& alpha);
int count_delta3_bruteforce(const CanonicalSequence& alpha);
int count_delta4_bruteforce(const CanonicalSequence& alpha);

/// Closed forms, valid for class-one sequences only (DomainError otherwise):
/// D4 sites are sum_t C(deg_t,2); D3 sites are C(p+1-s,2) minus that.
int delta3_count_formula(const CanonicalSequence& alpha);
int delta4_count_formula(const CanonicalSequence& alpha);

}  // namespace tensormp
