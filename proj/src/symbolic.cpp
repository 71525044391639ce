#include "lyapspec/symbolic.hpp"

#include <numeric>

namespace lyapspec {

std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (int sym : w) {
        if (sym < 0 || sym > 9) {
            s += '(' + std::to_string(sym) + ')';
        } else {
            s += static_cast<char>('0' + sym);
        }
    }
    return s;
}

Word repeated_word(int symbol, int count) {
    return Word(static_cast<std::size_t>(count), symbol);
}

namespace {

// Primitivity via strong connectivity plus aperiodicity; equivalent to some
// power being strictly positive. Used for matrices too large for the power probe.
bool is_primitive_graph(int p, const std::vector<std::uint8_t>& a) {
    auto at = [&](int i, int j) { return a[static_cast<std::size_t>(i) * p + j] != 0; };

    // reachability from 0 and to 0
    auto bfs = [&](bool forward) {
        std::vector<char> seen(p, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < p; ++v) {
                bool edge = forward ? at(u, v) : at(v, u);
                if (edge && !seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        return seen;
    };
    auto fwd = bfs(true);
    auto bwd = bfs(false);
    for (int i = 0; i < p; ++i)
        if (!fwd[i] || !bwd[i]) return false;

    // period = gcd over edges of dist(u)+1-dist(v) with BFS distances from 0
    std::vector<int> dist(p, -1);
    std::vector<int> queue{0};
    dist[0] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int u = queue[qi];
        for (int v = 0; v < p; ++v) {
            if (at(u, v) && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    int g = 0;
    for (int u = 0; u < p; ++u)
        for (int v = 0; v < p; ++v)
            if (at(u, v)) g = std::gcd(g, std::abs(dist[u] + 1 - dist[v]));
    return g == 1;
}

}  // namespace

TransitionMatrix::TransitionMatrix(std::vector<std::vector<int>> rows) {
    p_ = static_cast<int>(rows.size());
    if (p_ < 2) throw SchemaError("transition matrix must be at least 2x2");
    a_.assign(static_cast<std::size_t>(p_) * p_, 0);
    for (int i = 0; i < p_; ++i) {
        if (static_cast<int>(rows[i].size()) != p_)
            throw SchemaError("transition matrix must be square");
        for (int j = 0; j < p_; ++j) {
            int v = rows[i][j];
            if (v != 0 && v != 1) throw SchemaError("transition matrix entries must be 0 or 1");
            a_[static_cast<std::size_t>(i) * p_ + j] = static_cast<std::uint8_t>(v);
        }
    }
    for (int i = 0; i < p_; ++i) {
        bool row = false, col = false;
        for (int j = 0; j < p_; ++j) {
            row = row || allowed(i, j);
            col = col || allowed(j, i);
        }
        if (!row)
            throw SchemaError("transition matrix row " + std::to_string(i) +
                              " is all zeros; the map must be topologically mixing");
        if (!col)
            throw SchemaError("transition matrix column " + std::to_string(i) +
                              " is all zeros; the map must be topologically mixing");
    }
    bool mixing = p_ <= 16 ? positive_power_within(p_ * p_) : is_primitive_graph(p_, a_);
    if (!mixing)
        throw SchemaError("transition matrix is not topologically mixing "
                          "(no strictly positive power)");
}

TransitionMatrix TransitionMatrix::full(int p) {
    std::vector<std::vector<int>> rows(p, std::vector<int>(p, 1));
    return TransitionMatrix(std::move(rows));
}

bool TransitionMatrix::is_full() const {
    for (auto v : a_)
        if (!v) return false;
    return true;
}

TransitionMatrix TransitionMatrix::restricted(const std::vector<int>& symbols) const {
    const int q = static_cast<int>(symbols.size());
    std::vector<std::vector<int>> rows(q, std::vector<int>(q, 0));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            if (symbols[i] < 0 || symbols[i] >= p_ || symbols[j] < 0 || symbols[j] >= p_)
                throw SchemaError("restricted symbol out of range");
            rows[i][j] = allowed(symbols[i], symbols[j]) ? 1 : 0;
        }
    return TransitionMatrix(std::move(rows));
}

bool TransitionMatrix::positive_power_within(int kmax) const {
    std::vector<std::uint8_t> b = a_;
    auto all_positive = [&](const std::vector<std::uint8_t>& m) {
        for (auto v : m)
            if (!v) return false;
        return true;
    };
    for (int k = 1; k <= kmax; ++k) {
        if (all_positive(b)) return true;
        std::vector<std::uint8_t> next(b.size(), 0);
        for (int i = 0; i < p_; ++i)
            for (int l = 0; l < p_; ++l) {
                if (!b[static_cast<std::size_t>(i) * p_ + l]) continue;
                for (int j = 0; j < p_; ++j)
                    if (a_[static_cast<std::size_t>(l) * p_ + j])
                        next[static_cast<std::size_t>(i) * p_ + j] = 1;
            }
        b.swap(next);
    }
    return all_positive(b);
}

int max_enumeration_depth(int p, double max_work) {
    int n = 0;
    double w = 1.0;
    while (w * p <= max_work) {
        w *= p;
        ++n;
    }
    return n;
}

std::vector<Word> enumerate_words(const TransitionMatrix& a, int n,
                                  int forbid_run, int run_symbol) {
    if (n < 0) throw DomainError("word length must be nonnegative");
    const int p = a.symbol_count();
    if (n > max_enumeration_depth(p))
        throw ResourceLimitError("enumeration depth " + std::to_string(n) +
                                 " exceeds the work cap for alphabet size " +
                                 std::to_string(p));
    std::vector<Word> out;
    if (n == 0) {
        out.emplace_back();  // the empty word
        return out;
    }
    Word w;
    w.reserve(n);
    std::function<void(int, int)> rec = [&](int depth, int run) {
        if (depth == n) {
            out.push_back(w);
            return;
        }
        for (int s = 0; s < p; ++s) {
            if (!w.empty() && !a.allowed(w.back(), s)) continue;
            int next_run = (s == run_symbol) ? run + 1 : 0;
            if (forbid_run > 0 && next_run >= forbid_run) continue;
            w.push_back(s);
            rec(depth + 1, next_run);
            w.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

double count_words(const TransitionMatrix& a, int n) {
    if (n < 0) throw DomainError("word length must be nonnegative");
    if (n == 0) return 1.0;
    const int p = a.symbol_count();
    std::vector<double> v(p, 1.0), next(p);
    for (int step = 1; step < n; ++step) {
        for (int i = 0; i < p; ++i) {
            double s = 0.0;
            for (int j = 0; j < p; ++j)
                if (a.allowed(i, j)) s += v[j];
            next[i] = s;
        }
        v.swap(next);
    }
    double total = 0.0;
    for (double x : v) total += x;
    return total;
}

}  // namespace lyapspec
