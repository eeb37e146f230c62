#include "subcount/orientation.hpp"

#include <algorithm>

namespace subcount {

BoundedOrientation::BoundedOrientation(int cap, std::uint64_t seed, CapPolicy policy)
    : cap_(cap < 1 ? 1 : cap), policy_(policy), rng_(seed) {}

void BoundedOrientation::ensure_vertex(VertexId v) {
    if (v >= in_.size()) in_.resize(v + 1);
}

void BoundedOrientation::attach(VertexId from, VertexId to) {
    Rec rec{from, to, static_cast<std::uint32_t>(in_[to].size())};
    in_[to].push_back(from);
    edges_[pair_key(from, to)] = rec;
}

void BoundedOrientation::detach(const Rec& rec) {
    auto& list = in_[rec.to];
    VertexId moved = list.back();
    if (rec.pos + 1 != list.size()) {
        list[rec.pos] = moved;
        edges_.at(pair_key(moved, rec.to)).pos = rec.pos;
    }
    list.pop_back();
}

void BoundedOrientation::insert(VertexId u, VertexId v, std::vector<OrientationEvent>& out) {
    if (u == v) throw GraphError("loop on vertex " + std::to_string(u));
    std::uint64_t key = pair_key(u, v);
    if (edges_.count(key))
        throw GraphError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    ensure_vertex(std::max(u, v));
    std::size_t first = out.size();
    int du = in_degree(u), dv = in_degree(v);
    VertexId head;
    if (du != dv)
        head = du < dv ? u : v;
    else
        head = (rng_() & 1) ? u : v;
    VertexId tail = head == u ? v : u;
    attach(tail, head);
    out.push_back({OrientationEventKind::Added, tail, head});
    if (in_degree(head) > cap_ && !repair(head, out)) {
        if (policy_ == CapPolicy::Strict) {
            rollback(out, first);
            throw SparsityError("in-degree cap " + std::to_string(cap_) +
                                " cannot be restored; graph left the declared sparsity class");
        }
        // Adaptive: grow the cap until it has real slack over the measured
        // degeneracy (2x, so future cascades stay short), then re-orient
        // everything.
        std::vector<VertexId> order;
        int d = peeling_degeneracy(order);
        do {
            cap_ *= 2;
        } while (cap_ < 2 * d);
        rebuild_orientation(out);
        ++rebuilds_;
    }
}

bool BoundedOrientation::repair(VertexId start, std::vector<OrientationEvent>& out) {
    std::vector<VertexId> queue{start};
    std::size_t head_ix = 0;
    // The flip cascade only amortizes when the cap comfortably exceeds the
    // graph's arboricity; once it stops doing so, individual repairs start
    // sweeping large parts of the graph even though they still terminate.
    // Under the adaptive policy a cascade far longer than the cap is treated
    // as failure so the caller widens the cap and re-orients instead of
    // paying for the sweep on every insert.  Strict mode keeps an effectively
    // unbounded budget: it must exhaust the search before declaring that the
    // graph left the sparsity class.
    std::size_t budget = policy_ == CapPolicy::Adaptive
                             ? std::max<std::size_t>(64, 16 * static_cast<std::size_t>(cap_))
                             : std::max<std::size_t>(16, edges_.size());
    std::size_t flips = 0;
    while (head_ix < queue.size()) {
        VertexId w = queue[head_ix++];
        if (in_degree(w) <= cap_) continue;
        // Flip every in-edge of w, one at a time so the structure stays
        // consistent even if the budget runs out mid-vertex; w's in-degree
        // drops to zero and each tail gains one in-edge, possibly becoming
        // overfull itself.
        while (!in_[w].empty()) {
            if (flips >= budget) return false;
            VertexId x = in_[w].back();
            auto it = edges_.find(pair_key(x, w));
            detach(it->second);
            it->second = Rec{w, x, static_cast<std::uint32_t>(in_[x].size())};
            in_[x].push_back(w);
            out.push_back({OrientationEventKind::Flipped, x, w});
            ++flips_;
            ++flips;
            if (in_degree(x) > cap_) queue.push_back(x);
        }
    }
    return true;
}

void BoundedOrientation::rollback(std::vector<OrientationEvent>& out, std::size_t first) {
    for (std::size_t i = out.size(); i > first; --i) {
        const OrientationEvent& ev = out[i - 1];
        if (ev.kind == OrientationEventKind::Added) {
            auto it = edges_.find(pair_key(ev.from, ev.to));
            detach(it->second);
            edges_.erase(it);
        } else { // Flipped from->to became to->from; restore from->to
            auto it = edges_.find(pair_key(ev.from, ev.to));
            detach(it->second);
            Rec rec{ev.from, ev.to, static_cast<std::uint32_t>(in_[ev.to].size())};
            in_[ev.to].push_back(ev.from);
            it->second = rec;
        }
    }
    out.resize(first);
}

OrientationEvent BoundedOrientation::erase(VertexId u, VertexId v) {
    auto it = edges_.find(pair_key(u, v));
    if (it == edges_.end())
        throw GraphError("missing edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    Rec rec = it->second;
    detach(rec);
    edges_.erase(it);
    return {OrientationEventKind::Removed, rec.from, rec.to};
}

void BoundedOrientation::rebuild(int new_cap, std::vector<OrientationEvent>& out) {
    if (new_cap <= cap_) throw GraphError("rebuild cap must exceed the current cap");
    cap_ = new_cap;
    rebuild_orientation(out);
    ++rebuilds_;
}

int BoundedOrientation::peeling_degeneracy(std::vector<VertexId>& order_out) const {
    // Min-degree peeling over the current undirected edge set; order_out gets
    // the peel order (used to orient edges toward earlier-peeled endpoints).
    std::size_t n = in_.size();
    order_out.clear();
    if (n == 0) return 0;
    std::vector<std::vector<VertexId>> und(n);
    for (const auto& [key, rec] : edges_) {
        (void)key;
        und[rec.from].push_back(rec.to);
        und[rec.to].push_back(rec.from);
    }
    std::vector<std::uint32_t> deg(n);
    std::size_t maxdeg = 0;
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = static_cast<std::uint32_t>(und[v].size());
        maxdeg = std::max<std::size_t>(maxdeg, deg[v]);
    }
    std::vector<std::vector<VertexId>> bucket(maxdeg + 1);
    for (std::size_t v = 0; v < n; ++v) bucket[deg[v]].push_back(static_cast<VertexId>(v));
    std::vector<bool> peeled(n, false);
    std::size_t cursor = 0;
    int result = 0;
    for (std::size_t done = 0; done < n;) {
        while (bucket[cursor].empty()) ++cursor;
        VertexId v = bucket[cursor].back();
        bucket[cursor].pop_back();
        if (peeled[v] || deg[v] != cursor) continue;
        peeled[v] = true;
        ++done;
        order_out.push_back(v);
        result = std::max<int>(result, static_cast<int>(cursor));
        for (VertexId nb : und[v]) {
            if (peeled[nb]) continue;
            std::uint32_t d = --deg[nb];
            bucket[d].push_back(nb);
            if (d < cursor) cursor = d;
        }
    }
    return result;
}

void BoundedOrientation::rebuild_orientation(std::vector<OrientationEvent>& out) {
    std::vector<VertexId> order;
    peeling_degeneracy(order);
    std::vector<std::uint32_t> rank(in_.size(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<std::uint32_t>(i);

    // Orient every edge toward its earlier-peeled endpoint: a vertex's new
    // in-degree equals its degree at peel time, which is at most the
    // degeneracy and therefore at most the (grown) cap.
    std::vector<std::uint64_t> keys;
    keys.reserve(edges_.size());
    for (const auto& [key, rec] : edges_) {
        (void)rec;
        keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    for (auto& list : in_) list.clear();
    for (std::uint64_t key : keys) {
        Rec& rec = edges_.at(key);
        VertexId a = static_cast<VertexId>(key >> 32);
        VertexId b = static_cast<VertexId>(key & 0xffffffffu);
        VertexId head = rank[a] < rank[b] ? a : b;
        VertexId tail = head == a ? b : a;
        if (rec.from != tail) {
            out.push_back({OrientationEventKind::Flipped, rec.from, rec.to});
            ++flips_;
        }
        rec.from = tail;
        rec.to = head;
        rec.pos = static_cast<std::uint32_t>(in_[head].size());
        in_[head].push_back(tail);
    }
}

bool BoundedOrientation::has_pair(VertexId u, VertexId v) const {
    return edges_.count(pair_key(u, v)) != 0;
}

std::optional<std::pair<VertexId, VertexId>> BoundedOrientation::orientation(VertexId u, VertexId v) const {
    auto it = edges_.find(pair_key(u, v));
    if (it == edges_.end()) return std::nullopt;
    return std::make_pair(it->second.from, it->second.to);
}

int BoundedOrientation::in_degree(VertexId v) const {
    if (v >= in_.size()) return 0;
    return static_cast<int>(in_[v].size());
}

std::span<const VertexId> BoundedOrientation::in_neighbors(VertexId v) const {
    static const std::vector<VertexId> empty;
    if (v >= in_.size()) return empty;
    return in_[v];
}

int BoundedOrientation::max_in_degree() const {
    std::size_t m = 0;
    for (const auto& list : in_) m = std::max(m, list.size());
    return static_cast<int>(m);
}

std::vector<std::pair<VertexId, VertexId>> BoundedOrientation::oriented_edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    out.reserve(edges_.size());
    for (const auto& [key, rec] : edges_) {
        (void)key;
        out.emplace_back(rec.from, rec.to);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return pair_key(x.first, x.second) < pair_key(y.first, y.second);
    });
    return out;
}

} // namespace subcount
