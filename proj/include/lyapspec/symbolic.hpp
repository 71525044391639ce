#pragma once

#include <string>
#include <vector>

#include "lyapspec/common.hpp"

namespace lyapspec {

// Symbols are 0-based; the alphabet {0, ..., size-1}.
struct Alphabet {
    int size;
    explicit Alphabet(int p) : size(p) {
        if (p < 2) throw SchemaError("alphabet must have at least 2 symbols");
    }
};

using Word = std::vector<int>;

std::string word_to_string(const Word& w);
Word repeated_word(int symbol, int count);

// 0/1 transition structure of a topologically mixing subshift of finite type.
// Construction rejects matrices with a zero row/column or without a strictly
// positive power (the standing mixing assumption).
class TransitionMatrix {
public:
    explicit TransitionMatrix(std::vector<std::vector<int>> rows);
    static TransitionMatrix full(int p);

    int symbol_count() const { return p_; }
    bool allowed(int i, int j) const { return a_[static_cast<std::size_t>(i) * p_ + j] != 0; }
    bool is_full() const;

    // Restrict to a subset of symbols (original symbol ids are kept by the
    // caller; the returned matrix is indexed by position in `symbols`).
    TransitionMatrix restricted(const std::vector<int>& symbols) const;

    // True if some power A^k with k <= kmax is strictly positive.
    bool positive_power_within(int kmax) const;

private:
    TransitionMatrix() = default;
    int p_ = 0;
    std::vector<std::uint8_t> a_;
};

// Work-unit guard for explicit enumeration: refuses depths with p^n above
// ~2^30 elementary steps. Returns the largest admissible depth.
int max_enumeration_depth(int p, double max_work = 1073741824.0);

// All admissible words of length n in lexicographic order.
// forbid_run > 0 additionally excludes words containing `run_symbol`
// repeated forbid_run times (used by hyperbolic truncations).
std::vector<Word> enumerate_words(const TransitionMatrix& a, int n,
                                  int forbid_run = 0, int run_symbol = 0);

// Number of admissible words of length n, by repeated matrix-vector
// products; exact for counts below 2^53.
double count_words(const TransitionMatrix& a, int n);

}  // namespace lyapspec
