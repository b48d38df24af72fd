#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nilprob/errors.hpp"
#include "nilprob/free_words.hpp"

namespace nilprob {

// Folded core graph of the wedge of loops spelling the input words: a
// labelled directed graph in which no two equally-labelled edges share a
// source or a target. The subgroup rank is its first Betti number.
struct CoreGraph {
    int vertex_count = 1;
    int base = 0;
    std::vector<std::array<int, 3>> edges;  // (source, label, target), label 1..rank

    int rank() const { return static_cast<int>(edges.size()) - vertex_count + 1; }

    bool is_folded() const {
        std::map<std::pair<int, int>, int> out, in;
        for (const auto& e : edges) {
            if (!out.emplace(std::make_pair(e[0], e[1]), e[2]).second) return false;
            if (!in.emplace(std::make_pair(e[2], e[1]), e[0]).second) return false;
        }
        return true;
    }

    // canonical serialization via breadth-first relabelling from the base;
    // two cores are isomorphic as based labelled graphs iff these agree
    std::string canonical_form() const {
        std::map<std::pair<int, int>, int> out, in;
        for (const auto& e : edges) {
            out[{e[0], e[1]}] = e[2];
            in[{e[2], e[1]}] = e[0];
        }
        std::vector<int> order(vertex_count, -1);
        std::vector<int> bfs{base};
        order[base] = 0;
        int next = 1;
        std::size_t head = 0;
        int max_label = 0;
        for (const auto& e : edges) max_label = std::max(max_label, e[1]);
        while (head < bfs.size()) {
            int v = bfs[head++];
            for (int l = 1; l <= max_label; ++l) {
                auto it = out.find({v, l});
                if (it != out.end() && order[it->second] < 0) {
                    order[it->second] = next++;
                    bfs.push_back(it->second);
                }
                auto jt = in.find({v, l});
                if (jt != in.end() && order[jt->second] < 0) {
                    order[jt->second] = next++;
                    bfs.push_back(jt->second);
                }
            }
        }
        std::vector<std::array<int, 3>> renamed;
        renamed.reserve(edges.size());
        for (const auto& e : edges) renamed.push_back({order[e[0]], e[1], order[e[2]]});
        std::sort(renamed.begin(), renamed.end());
        std::string s;
        for (const auto& e : renamed) {
            s += std::to_string(e[0]) + "," + std::to_string(e[1]) + "," + std::to_string(e[2]) + ";";
        }
        return s;
    }
};

namespace detail {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

}  // namespace detail

// Fold by repeated scanning: whenever two equally-labelled edges share a
// source (or a target), identify the other endpoints and rescan.
inline CoreGraph fold_loops(const std::vector<FreeWord>& loops) {
    int nv = 1;
    std::vector<std::array<int, 3>> edges;
    int fresh = 1;
    for (const FreeWord& w : loops) {
        nv += std::max(0, fw_length(w) - 1);
        int cur = 0;
        for (std::size_t i = 0; i < w.letters.size(); ++i) {
            int nxt = (i + 1 == w.letters.size()) ? 0 : fresh++;
            int l = w.letters[i];
            if (l > 0) {
                edges.push_back({cur, l, nxt});
            } else {
                edges.push_back({nxt, -l, cur});
            }
            cur = nxt;
        }
    }
    detail::Dsu dsu(nv);
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::pair<int, int>, int> out, in;
        for (const auto& e : edges) {
            int u = dsu.find(e[0]), v = dsu.find(e[2]);
            auto [it, fresh_out] = out.try_emplace(std::make_pair(u, e[1]), v);
            if (!fresh_out) {
                if (it->second != v) {
                    dsu.unite(it->second, v);
                    changed = true;
                    break;
                }
                continue;  // parallel duplicate of a recorded edge
            }
            auto [jt, fresh_in] = in.try_emplace(std::make_pair(v, e[1]), u);
            if (!fresh_in && jt->second != u) {
                dsu.unite(jt->second, u);
                changed = true;
                break;
            }
        }
    }

    CoreGraph g;
    std::vector<int> rename(nv, -1);
    int next = 0;
    for (int v = 0; v < nv; ++v) {
        if (dsu.find(v) == v) rename[v] = next++;
    }
    g.vertex_count = next;
    g.base = rename[dsu.find(0)];
    std::set<std::array<int, 3>> dedup;
    for (const auto& e : edges) {
        dedup.insert({rename[dsu.find(e[0])], e[1], rename[dsu.find(e[2])]});
    }
    g.edges.assign(dedup.begin(), dedup.end());
    return g;
}

// rank of the subgroup generated by the tuple, via the folded core graph
inline int stallings_rank(const std::vector<FreeWord>& tuple) {
    return fold_loops(tuple).rank();
}

}  // namespace nilprob
