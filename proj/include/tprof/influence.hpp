#pragma once

#include "tprof/movement_graph.hpp"
#include "tprof/trips.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace tprof {

struct SphereOfInfluence {
    std::string center;
    int distance = 1;
    std::vector<std::string> members;  ///< sorted ids, center excluded

    friend bool operator==(const SphereOfInfluence&, const SphereOfInfluence&) = default;
};

/// round(avg_length) - 1, never below 1. Throws DataError when the
/// dataset is empty.
int sphere_distance(const SequenceDataset& dataset);
int sphere_distance_from_average(double avg_length);

/// Nodes reachable from `center` along arc direction in 1..distance hops,
/// excluding the center. Throws UsageError if the center is not in the graph
/// or distance < 1.
SphereOfInfluence sphere_of_influence(const MovementGraph& graph, const std::string& center, int distance);

/// Spheres for every id in `centers`, same order.
std::vector<SphereOfInfluence> spheres_of_influence(const MovementGraph& graph, const std::vector<std::string>& centers,
                                                    int distance);

/// Row i, column j: share of sphere i's members also in sphere j. Not
/// symmetric. The diagonal is 1; rows of empty spheres are otherwise 0.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    explicit SimilarityMatrix(std::vector<std::string> order);

    std::size_t size() const { return order_.size(); }
    const std::vector<std::string>& order() const { return order_; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * order_.size() + j]; }
    /// |S_i ∩ S_j|, and |S_i| on the diagonal.
    std::size_t overlap(std::size_t i, std::size_t j) const { return overlap_[i * order_.size() + j]; }
    std::size_t sphere_size(std::size_t i) const { return overlap(i, i); }

    /// Centers whose sphere has no members.
    std::vector<std::string> empty_rows() const;

private:
    friend SimilarityMatrix similarity_matrix(const std::vector<SphereOfInfluence>& spheres);
    std::vector<std::string> order_;
    std::vector<double> entries_;
    std::vector<std::size_t> overlap_;
};

/// Throws UsageError if the spheres use different distances.
SimilarityMatrix similarity_matrix(const std::vector<SphereOfInfluence>& spheres);

/// Header row and column of ids, entries at six decimals.
void write_similarity_csv(std::ostream& out, const SimilarityMatrix& m);

/// [{"center", "D", "members"}...]
void write_spheres_json(std::ostream& out, const std::vector<SphereOfInfluence>& spheres);
std::vector<SphereOfInfluence> read_spheres_json(std::istream& in);

} // namespace tprof
