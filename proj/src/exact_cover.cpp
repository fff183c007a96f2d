#include "dforge/exact_cover.hpp"

#include "dforge/error.hpp"
#include "dforge/random.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace dforge {
namespace {

// Knuth's dancing links over the edge-by-clique incidence matrix. Columns are
// universe edges in sorted order; branching picks the column with the fewest
// live rows, ties to the smallest column id.
class DancingLinks {
public:
    DancingLinks(const CoverInstance& inst, const std::vector<std::size_t>& row_order) : inst_(inst) {
        const int cols = static_cast<int>(inst.universe.num_edges());
        root_ = cols;
        const auto header_count = static_cast<std::size_t>(cols) + 1;
        left_.resize(header_count);
        right_.resize(header_count);
        up_.resize(header_count);
        down_.resize(header_count);
        column_.resize(header_count);
        row_.assign(header_count, -1);
        size_.assign(static_cast<std::size_t>(cols), 0);
        for (int c = 0; c <= cols; ++c) {
            left_[idx(c)] = c == 0 ? cols : c - 1;
            right_[idx(c)] = c == cols ? 0 : c + 1;
            up_[idx(c)] = down_[idx(c)] = c;
            column_[idx(c)] = c;
        }
        if (cols == 0) left_[idx(root_)] = right_[idx(root_)] = root_;
        for (std::size_t r : row_order) add_row(static_cast<int>(r));
    }

    // Removes the rows of `partial`; false when they clash or are not candidates.
    bool preselect(const Packing& partial) {
        for (const Clique& c : partial) {
            auto it = std::lower_bound(inst_.candidates.begin(), inst_.candidates.end(), c);
            if (it == inst_.candidates.end() || *it != c) return false;
            const int r = static_cast<int>(it - inst_.candidates.begin());
            const int first = row_head_[static_cast<std::size_t>(r)];
            // Every column of the row must still be live.
            int node = first;
            do {
                if (!is_live_column(column_[idx(node)])) return false;
                node = right_[idx(node)];
            } while (node != first);
            node = first;
            do {
                cover(column_[idx(node)]);
                node = right_[idx(node)];
            } while (node != first);
            chosen_.push_back(r);
        }
        return true;
    }

    // visit returns false to stop the search.
    void search(std::uint64_t budget, const std::function<bool(const std::vector<int>&)>& visit) {
        budget_ = budget;
        stop_ = false;
        recurse(visit);
    }

    std::uint64_t nodes() const { return nodes_; }
    bool budget_hit() const { return budget_hit_; }

private:
    static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

    bool is_live_column(int c) const {
        for (int j = right_[idx(root_)]; j != root_; j = right_[idx(j)])
            if (j == c) return true;
        return false;
    }

    void add_row(int r) {
        const Clique& clique = inst_.candidates[static_cast<std::size_t>(r)];
        int first = -1;
        for (const Edge& e : clique.edges()) {
            const int c = inst_.universe.edge_index(e);
            const int node = static_cast<int>(left_.size());
            left_.push_back(node);
            right_.push_back(node);
            column_.push_back(c);
            row_.push_back(r);
            up_.push_back(up_[idx(c)]);
            down_.push_back(c);
            down_[idx(up_[idx(c)])] = node;
            up_[idx(c)] = node;
            ++size_[idx(c)];
            if (first < 0) {
                first = node;
            } else {
                left_[idx(node)] = left_[idx(first)];
                right_[idx(node)] = first;
                right_[idx(left_[idx(first)])] = node;
                left_[idx(first)] = node;
            }
        }
        if (row_head_.size() <= static_cast<std::size_t>(r)) row_head_.resize(static_cast<std::size_t>(r) + 1, -1);
        row_head_[static_cast<std::size_t>(r)] = first;
    }

    void cover(int c) {
        right_[idx(left_[idx(c)])] = right_[idx(c)];
        left_[idx(right_[idx(c)])] = left_[idx(c)];
        for (int i = down_[idx(c)]; i != c; i = down_[idx(i)]) {
            for (int j = right_[idx(i)]; j != i; j = right_[idx(j)]) {
                up_[idx(down_[idx(j)])] = up_[idx(j)];
                down_[idx(up_[idx(j)])] = down_[idx(j)];
                --size_[idx(column_[idx(j)])];
            }
        }
    }

    void uncover(int c) {
        for (int i = up_[idx(c)]; i != c; i = up_[idx(i)]) {
            for (int j = left_[idx(i)]; j != i; j = left_[idx(j)]) {
                ++size_[idx(column_[idx(j)])];
                up_[idx(down_[idx(j)])] = j;
                down_[idx(up_[idx(j)])] = j;
            }
        }
        right_[idx(left_[idx(c)])] = c;
        left_[idx(right_[idx(c)])] = c;
    }

    void recurse(const std::function<bool(const std::vector<int>&)>& visit) {
        if (stop_) return;
        if (budget_ != 0 && nodes_ >= budget_) {
            budget_hit_ = true;
            stop_ = true;
            return;
        }
        ++nodes_;
        if (right_[idx(root_)] == root_) {
            if (!visit(chosen_)) stop_ = true;
            return;
        }
        int best = -1;
        int best_size = std::numeric_limits<int>::max();
        for (int c = right_[idx(root_)]; c != root_; c = right_[idx(c)]) {
            if (size_[idx(c)] < best_size) {
                best = c;
                best_size = size_[idx(c)];
                if (best_size == 0) break;
            }
        }
        if (best_size == 0) return;
        cover(best);
        for (int r = down_[idx(best)]; r != best && !stop_; r = down_[idx(r)]) {
            chosen_.push_back(row_[idx(r)]);
            for (int j = right_[idx(r)]; j != r; j = right_[idx(j)]) cover(column_[idx(j)]);
            recurse(visit);
            for (int j = left_[idx(r)]; j != r; j = left_[idx(j)]) uncover(column_[idx(j)]);
            chosen_.pop_back();
        }
        uncover(best);
    }

    const CoverInstance& inst_;
    int root_ = 0;
    std::vector<int> left_, right_, up_, down_, column_, row_, size_;
    std::vector<int> row_head_;
    std::vector<int> chosen_;
    std::uint64_t nodes_ = 0;
    std::uint64_t budget_ = 0;
    bool budget_hit_ = false;
    bool stop_ = false;
};

CoverInstance normalized(const CoverInstance& inst) {
    CoverInstance out = inst;
    out.candidates = canonical(inst.candidates);
    validate(out);
    return out;
}

std::vector<std::size_t> identity_order(std::size_t n) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    return order;
}

Packing to_packing(const CoverInstance& inst, const std::vector<int>& rows) {
    Packing p;
    p.reserve(rows.size());
    for (int r : rows) p.push_back(inst.candidates[static_cast<std::size_t>(r)]);
    return canonical(std::move(p));
}

}  // namespace

CoverInstance CoverInstance::all_cliques(const Graph& g, int q) {
    return CoverInstance{g, list_cliques(g, q), q};
}

void validate(const CoverInstance& inst) {
    for (const Clique& c : inst.candidates) {
        if (c.size() != inst.q)
            throw InvalidParameter("cover instance: candidate " + to_string(c) + " is not a " + std::to_string(inst.q) +
                                   "-clique");
        for (const Edge& e : c.edges())
            if (!inst.universe.has_edge(e))
                throw InvalidParameter("cover instance: candidate " + to_string(c) + " uses " + to_string(e) +
                                       " outside the universe");
    }
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Solved: return "solved";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::BudgetExhausted: return "budget-exhausted";
    }
    return "unknown";
}

SolveResult find_decomposition(const CoverInstance& raw, std::uint64_t budget, std::optional<std::uint64_t> seed) {
    const CoverInstance inst = normalized(raw);
    SolveResult result;
    if (inst.q >= 3 && !is_kq_divisible(inst.universe, inst.q)) return result;
    auto order = identity_order(inst.candidates.size());
    if (seed) {
        Rng rng(*seed);
        rng.shuffle(order);
    }
    DancingLinks dlx(inst, order);
    dlx.search(budget, [&](const std::vector<int>& rows) {
        result.packing = to_packing(inst, rows);
        result.status = SolveStatus::Solved;
        return false;
    });
    result.nodes = dlx.nodes();
    if (result.status != SolveStatus::Solved && dlx.budget_hit()) result.status = SolveStatus::BudgetExhausted;
    return result;
}

Enumeration enumerate_decompositions(const CoverInstance& raw, std::size_t limit) {
    const CoverInstance inst = normalized(raw);
    Enumeration out;
    if (inst.q >= 3 && !is_kq_divisible(inst.universe, inst.q)) return out;
    DancingLinks dlx(inst, identity_order(inst.candidates.size()));
    dlx.search(0, [&](const std::vector<int>& rows) {
        if (out.decompositions.size() >= limit) {
            out.truncated = true;
            return false;
        }
        out.decompositions.push_back(to_packing(inst, rows));
        return true;
    });
    out.nodes = dlx.nodes();
    std::sort(out.decompositions.begin(), out.decompositions.end());
    return out;
}

std::uint64_t count_extensions(const CoverInstance& raw, const Packing& partial) {
    const CoverInstance inst = normalized(raw);
    if (inst.q >= 3 && !is_kq_divisible(inst.universe, inst.q)) return 0;
    // A partial with a repeated clique is not a packing.
    if (canonical(partial).size() != partial.size()) return 0;
    DancingLinks dlx(inst, identity_order(inst.candidates.size()));
    if (!dlx.preselect(canonical(partial))) return 0;
    std::uint64_t count = 0;
    dlx.search(0, [&](const std::vector<int>&) {
        ++count;
        return true;
    });
    return count;
}

}  // namespace dforge
