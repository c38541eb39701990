#include "sampcent/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "sampcent/error.hpp"
#include "sampcent/rng.hpp"

namespace sampcent {

GeneratorSpec GeneratorSpec::parse(std::string_view text) {
    GeneratorSpec spec;
    const auto colon = text.find(':');
    spec.name = std::string(text.substr(0, colon));
    if (spec.name.empty()) {
        throw ConfigError("generator spec has no name");
    }
    if (colon == std::string_view::npos) {
        return spec;
    }
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw ConfigError("malformed generator parameter '" + std::string(item) + "'");
        }
        spec.params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
        if (comma == std::string_view::npos) {
            break;
        }
        rest = rest.substr(comma + 1);
    }
    return spec;
}

std::string GeneratorSpec::to_string() const {
    std::string out = name;
    char sep = ':';
    for (const auto& [key, value] : params) {
        out += sep;
        out += key + "=" + value;
        sep = ',';
    }
    return out;
}

namespace {

class Params {
public:
    explicit Params(const GeneratorSpec& spec) : spec_(spec) {}

    Index integer(const std::string& key, std::optional<Index> fallback = {}) {
        const auto* text = find(key);
        if (text == nullptr) {
            if (!fallback) {
                throw ConfigError("generator '" + spec_.name + "' needs parameter '" + key + "'");
            }
            return *fallback;
        }
        Index value = 0;
        const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
        if (ec != std::errc{} || ptr != text->data() + text->size()) {
            throw ConfigError("parameter '" + key + "' is not an integer: " + *text);
        }
        return value;
    }

    double real(const std::string& key, std::optional<double> fallback = {}) {
        const auto* text = find(key);
        if (text == nullptr) {
            if (!fallback) {
                throw ConfigError("generator '" + spec_.name + "' needs parameter '" + key + "'");
            }
            return *fallback;
        }
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(*text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text->size() || text->empty()) {
            throw ConfigError("parameter '" + key + "' is not a number: " + *text);
        }
        return value;
    }

    std::uint64_t seed() { return static_cast<std::uint64_t>(integer("seed", 0)); }

    void finish() const {
        for (const auto& [key, value] : spec_.params) {
            if (!used_.contains(key)) {
                throw ConfigError("unknown parameter '" + key + "' for generator '" + spec_.name +
                                  "'");
            }
        }
    }

private:
    const std::string* find(const std::string& key) {
        used_.insert(key);
        const auto it = spec_.params.find(key);
        return it == spec_.params.end() ? nullptr : &it->second;
    }

    const GeneratorSpec& spec_;
    std::set<std::string> used_;
};

void check_order(Index n, Index minimum) {
    if (n < minimum) {
        throw ConfigError("generator needs at least " + std::to_string(minimum) + " nodes");
    }
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError("edge probability must lie in [0, 1]");
    }
}

// Appends each pair (slot) of [0, count) independently with probability p,
// using geometric skips between successes.
template <typename Emit>
void bernoulli_slots(std::uint64_t count, double p, Rng& rng, Emit emit) {
    if (p <= 0.0 || count == 0) {
        return;
    }
    if (p >= 1.0) {
        for (std::uint64_t s = 0; s < count; ++s) {
            emit(s);
        }
        return;
    }
    const double log_q = std::log1p(-p);
    double pos = -1.0;
    while (true) {
        const double u = 1.0 - rng.uniform01();
        pos += 1.0 + std::floor(std::log(u) / log_q);
        if (pos >= static_cast<double>(count)) {
            return;
        }
        emit(static_cast<std::uint64_t>(pos));
    }
}

SparseGraph finish_graph(Index n, const std::vector<Edge>& edges, bool directed) {
    if (edges.empty()) {
        throw Error("graph has no edges");
    }
    return SparseGraph::from_edges(n, edges, directed);
}

} // namespace

SparseGraph erdos_renyi(Index n, double p, bool directed, std::uint64_t seed) {
    check_order(n, 2);
    check_probability(p);
    Rng rng(seed, Stream::generator);
    std::vector<Edge> edges;
    const auto un = static_cast<std::uint64_t>(n);
    if (directed) {
        // Slot s encodes source s / (n-1) and the s % (n-1)-th other node.
        bernoulli_slots(un * (un - 1), p, rng, [&](std::uint64_t s) {
            const auto i = static_cast<Index>(s / (un - 1));
            auto j = static_cast<Index>(s % (un - 1));
            if (j >= i) {
                ++j;
            }
            edges.emplace_back(i, j);
        });
    } else {
        // Slot s enumerates pairs i < j row by row.
        Index i = 0;
        std::uint64_t row_start = 0;
        bernoulli_slots(un * (un - 1) / 2, p, rng, [&](std::uint64_t s) {
            while (s >= row_start + static_cast<std::uint64_t>(n - 1 - i)) {
                row_start += static_cast<std::uint64_t>(n - 1 - i);
                ++i;
            }
            edges.emplace_back(i, i + 1 + static_cast<Index>(s - row_start));
        });
    }
    return finish_graph(n, edges, directed);
}

SparseGraph preferential_attachment(Index n, Index m, std::uint64_t seed) {
    if (m < 1) {
        throw ConfigError("attachment count m must be at least 1");
    }
    check_order(n, m + 1);
    Rng rng(seed, Stream::generator);
    std::vector<Edge> edges;
    // Every edge endpoint appears once here, so a uniform pick is degree-proportional.
    std::vector<Index> endpoints;
    for (Index i = 0; i <= m; ++i) {
        for (Index j = i + 1; j <= m; ++j) {
            edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }
    std::vector<Index> targets;
    for (Index v = m + 1; v < n; ++v) {
        targets.clear();
        while (static_cast<Index>(targets.size()) < m) {
            const Index t = endpoints[rng.uniform_below(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
                targets.push_back(t);
            }
        }
        for (const Index t : targets) {
            edges.emplace_back(t, v);
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return finish_graph(n, edges, false);
}

SparseGraph star_graph(Index leaves) {
    if (leaves < 1) {
        throw ConfigError("a star needs at least one leaf");
    }
    std::vector<Edge> edges;
    for (Index i = 1; i <= leaves; ++i) {
        edges.emplace_back(0, i);
    }
    return finish_graph(leaves + 1, edges, false);
}

SparseGraph path_graph(Index n, bool directed) {
    check_order(n, 2);
    std::vector<Edge> edges;
    for (Index i = 0; i + 1 < n; ++i) {
        edges.emplace_back(i, i + 1);
    }
    return finish_graph(n, edges, directed);
}

SparseGraph cycle_graph(Index n, bool directed) {
    check_order(n, 3);
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i) {
        edges.emplace_back(i, (i + 1) % n);
    }
    return finish_graph(n, edges, directed);
}

SparseGraph two_cluster_bridge(Index n, double intra_p, std::uint64_t seed) {
    check_order(n, 4);
    check_probability(intra_p);
    Rng rng(seed, Stream::generator);
    const Index h = n / 2;
    std::vector<Edge> edges;
    for (const auto& [lo, hi] : {std::pair<Index, Index>{0, h}, std::pair<Index, Index>{h, n}}) {
        const auto size = static_cast<std::uint64_t>(hi - lo);
        Index i = 0;
        std::uint64_t row_start = 0;
        bernoulli_slots(size * (size - 1) / 2, intra_p, rng, [&](std::uint64_t s) {
            while (s >= row_start + (size - 1 - static_cast<std::uint64_t>(i))) {
                row_start += size - 1 - static_cast<std::uint64_t>(i);
                ++i;
            }
            edges.emplace_back(lo + i, lo + i + 1 + static_cast<Index>(s - row_start));
        });
    }
    const auto a = static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(h)));
    const auto b = h + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(n - h)));
    edges.emplace_back(a, b);
    return finish_graph(n, edges, false);
}

SparseGraph generate(const GeneratorSpec& spec) {
    Params p(spec);
    SparseGraph g;
    if (spec.name == "er") {
        const Index n = p.integer("n");
        const double prob = p.real("p");
        const bool directed = p.integer("directed", 1) != 0;
        g = erdos_renyi(n, prob, directed, p.seed());
    } else if (spec.name == "pa") {
        const Index n = p.integer("n");
        const Index m = p.integer("m", 5);
        g = preferential_attachment(n, m, p.seed());
    } else if (spec.name == "star") {
        g = star_graph(p.integer("leaves"));
    } else if (spec.name == "path") {
        const Index n = p.integer("n");
        g = path_graph(n, p.integer("directed", 0) != 0);
    } else if (spec.name == "cycle") {
        const Index n = p.integer("n");
        g = cycle_graph(n, p.integer("directed", 0) != 0);
    } else if (spec.name == "two-cluster-bridge") {
        const Index n = p.integer("n");
        const double prob = p.real("intra_p");
        g = two_cluster_bridge(n, prob, p.seed());
    } else {
        throw ConfigError("unknown generator '" + spec.name + "'");
    }
    p.finish();
    return g;
}

SparseGraph generate(std::string_view spec) { return generate(GeneratorSpec::parse(spec)); }

} // namespace sampcent
