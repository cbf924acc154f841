#include "tprof/influence.hpp"

#include "tprof/csv.hpp"
#include "tprof/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace tprof {

int sphere_distance_from_average(double avg_length) {
    const auto rounded = static_cast<int>(std::lround(avg_length));
    return std::max(1, rounded - 1);
}

int sphere_distance(const SequenceDataset& dataset) {
    if (dataset.count() == 0) throw DataError("sphere distance undefined for an empty sequence dataset");
    return sphere_distance_from_average(dataset.avg_length());
}

SphereOfInfluence sphere_of_influence(const MovementGraph& graph, const std::string& center, int distance) {
    if (distance < 1) throw UsageError("sphere distance must be at least 1");
    const auto start = graph.find(center);
    if (!start) throw UsageError("sphere center '" + center + "' is not a graph node");

    const auto adj = graph.out_adjacency();
    std::vector<int> depth(graph.node_count(), -1);
    std::vector<std::size_t> frontier{*start};
    depth[*start] = 0;
    for (int d = 1; d <= distance && !frontier.empty(); ++d) {
        std::vector<std::size_t> next;
        for (auto u : frontier)
            for (auto v : adj[u])
                if (depth[v] < 0) {
                    depth[v] = d;
                    next.push_back(v);
                }
        frontier = std::move(next);
    }

    SphereOfInfluence sphere{center, distance, {}};
    for (std::size_t i = 0; i < depth.size(); ++i)
        if (depth[i] > 0) sphere.members.push_back(graph.node(i).id);
    return sphere;  // node order is id order, so members are sorted
}

std::vector<SphereOfInfluence> spheres_of_influence(const MovementGraph& graph, const std::vector<std::string>& centers,
                                                    int distance) {
    std::vector<SphereOfInfluence> out;
    out.reserve(centers.size());
    for (const auto& c : centers) out.push_back(sphere_of_influence(graph, c, distance));
    return out;
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> order)
    : order_(std::move(order)), entries_(order_.size() * order_.size(), 0.0),
      overlap_(order_.size() * order_.size(), 0) {}

std::vector<std::string> SimilarityMatrix::empty_rows() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (sphere_size(i) == 0) out.push_back(order_[i]);
    return out;
}

SimilarityMatrix similarity_matrix(const std::vector<SphereOfInfluence>& spheres) {
    std::vector<std::string> order;
    for (const auto& s : spheres) {
        if (s.distance != spheres.front().distance) throw UsageError("spheres computed at different distances");
        order.push_back(s.center);
    }
    SimilarityMatrix m(std::move(order));
    const std::size_t n = spheres.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = spheres[i].members;
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t common = a.size();
            if (i != j) {
                const auto& b = spheres[j].members;
                common = 0;
                for (auto ia = a.begin(), ib = b.begin(); ia != a.end() && ib != b.end();) {
                    if (*ia < *ib)
                        ++ia;
                    else if (*ib < *ia)
                        ++ib;
                    else {
                        ++common;
                        ++ia;
                        ++ib;
                    }
                }
            }
            m.overlap_[i * n + j] = common;
            if (i == j)
                m.entries_[i * n + j] = 1.0;
            else if (!a.empty())
                m.entries_[i * n + j] = static_cast<double>(common) / static_cast<double>(a.size());
        }
    }
    return m;
}

void write_similarity_csv(std::ostream& out, const SimilarityMatrix& m) {
    std::vector<std::string> row{""};
    row.insert(row.end(), m.order().begin(), m.order().end());
    csv::write_record(out, row);
    for (std::size_t i = 0; i < m.size(); ++i) {
        row.assign(1, m.order()[i]);
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(csv::fixed(m(i, j)));
        csv::write_record(out, row);
    }
}

void write_spheres_json(std::ostream& out, const std::vector<SphereOfInfluence>& spheres) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& s : spheres) {
        nlohmann::ordered_json entry;
        entry["center"] = s.center;
        entry["D"] = s.distance;
        entry["members"] = s.members;
        doc.push_back(std::move(entry));
    }
    out << doc.dump(2) << '\n';
}

std::vector<SphereOfInfluence> read_spheres_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("spheres JSON: ") + e.what());
    }
    if (!doc.is_array()) throw DataError("spheres JSON must be an array");
    std::vector<SphereOfInfluence> spheres;
    try {
        for (const auto& e : doc) {
            SphereOfInfluence s{e.at("center").get<std::string>(), e.at("D").get<int>(),
                                e.at("members").get<std::vector<std::string>>()};
            std::sort(s.members.begin(), s.members.end());
            spheres.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("spheres JSON: ") + e.what());
    }
    return spheres;
}

} // namespace tprof
