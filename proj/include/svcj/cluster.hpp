#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svcj/dates.hpp"
#include "svcj/errors.hpp"
#include "svcj/parallel.hpp"
#include "svcj/rng.hpp"
#include "svcj/summary.hpp"

namespace svcj {

struct PointSet {
    std::vector<std::vector<double>> points; // N x d
    std::vector<Date> dates;                 // empty or length N
    std::vector<std::string> dim_names;      // length d

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points[0].size(); }
};

// Per-dimension (mean, sd) applied by zscore.
struct Scaling {
    std::vector<double> mean;
    std::vector<double> sd;
};

struct ClusterResult {
    std::size_t k = 0;
    std::vector<std::vector<double>> centroids; // scaled space
    std::vector<int> labels;                    // per point, in [0, k)
    double wcss = 0.0;
    Scaling scaling;
};

inline void check_points(const PointSet& ps) {
    const std::size_t d = ps.dim();
    if (!ps.dates.empty() && ps.dates.size() != ps.size())
        throw validation_error("point set: dates length mismatch");
    for (const auto& p : ps.points) {
        if (p.size() != d) throw validation_error("point set: ragged dimensions");
        for (double x : p)
            if (!std::isfinite(x)) throw validation_error("point set: non-finite coordinate");
    }
}

// x' = (x - mean) / sd per dimension, population sd.
inline std::pair<PointSet, Scaling> zscore(const PointSet& ps) {
    check_points(ps);
    if (ps.size() == 0) throw validation_error("zscore: empty point set");
    const std::size_t n = ps.size(), d = ps.dim();
    Scaling sc;
    sc.mean.assign(d, 0.0);
    sc.sd.assign(d, 0.0);
    for (const auto& p : ps.points)
        for (std::size_t j = 0; j < d; ++j) sc.mean[j] += p[j];
    for (std::size_t j = 0; j < d; ++j) sc.mean[j] /= double(n);
    for (const auto& p : ps.points)
        for (std::size_t j = 0; j < d; ++j) {
            const double dx = p[j] - sc.mean[j];
            sc.sd[j] += dx * dx;
        }
    for (std::size_t j = 0; j < d; ++j) {
        sc.sd[j] = std::sqrt(sc.sd[j] / double(n));
        if (!(sc.sd[j] > 0.0))
            throw validation_error("zscore: degenerate dimension '" +
                                   (j < ps.dim_names.size() ? ps.dim_names[j]
                                                            : std::to_string(j)) +
                                   "' has zero sd");
    }
    PointSet out = ps;
    for (auto& p : out.points)
        for (std::size_t j = 0; j < d; ++j) p[j] = (p[j] - sc.mean[j]) / sc.sd[j];
    return {out, sc};
}

namespace detail {

inline double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

inline std::size_t count_distinct(const std::vector<std::vector<double>>& pts) {
    std::set<std::vector<double>> uniq(pts.begin(), pts.end());
    return uniq.size();
}

// Nearest centroid, ties to the lowest index.
inline int nearest(const std::vector<double>& p,
                   const std::vector<std::vector<double>>& centroids) {
    int best = 0;
    double best_d = dist2(p, centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
        const double d = dist2(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = int(c);
        }
    }
    return best;
}

inline std::vector<std::vector<double>> kmeanspp_init(
    const std::vector<std::vector<double>>& pts, std::size_t k, Rng& rng) {
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    centroids.push_back(pts[rng.uniform_index(pts.size())]);
    std::vector<double> d2(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) d2[i] = dist2(pts[i], centroids[0]);
    while (centroids.size() < k) {
        double total = 0.0;
        for (double d : d2) total += d;
        if (!(total > 0.0))
            throw numerical_error("k-means++: no distinct point left to seed");
        double u = rng.uniform() * total;
        std::size_t sel = pts.size() - 1;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            u -= d2[i];
            if (u <= 0.0) {
                sel = i;
                break;
            }
        }
        centroids.push_back(pts[sel]);
        for (std::size_t i = 0; i < pts.size(); ++i)
            d2[i] = std::min(d2[i], dist2(pts[i], centroids.back()));
    }
    return centroids;
}

struct LloydResult {
    std::vector<std::vector<double>> centroids;
    std::vector<int> labels;
    double wcss = 0.0;
};

// One restart: k-means++ seeding then Lloyd iterations until the labels
// stop changing (or 300 iterations). Empty clusters are re-seeded with the
// point farthest from its assigned centroid.
inline LloydResult lloyd(const std::vector<std::vector<double>>& pts, std::size_t k,
                         Rng& rng, std::vector<double>* wcss_trace = nullptr) {
    constexpr std::size_t kMaxIter = 300;
    const std::size_t n = pts.size(), d = pts[0].size();

    LloydResult res;
    res.centroids = kmeanspp_init(pts, k, rng);
    res.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.labels[i] = nearest(pts[i], res.centroids);

    std::vector<std::size_t> sizes(k);
    auto update_centroids = [&] {
        for (auto& c : res.centroids) std::fill(c.begin(), c.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), std::size_t(0));
        for (std::size_t i = 0; i < n; ++i) {
            auto& c = res.centroids[res.labels[i]];
            for (std::size_t j = 0; j < d; ++j) c[j] += pts[i][j];
            ++sizes[res.labels[i]];
        }
        for (std::size_t c = 0; c < k; ++c)
            if (sizes[c] > 0)
                for (std::size_t j = 0; j < d; ++j) res.centroids[c][j] /= double(sizes[c]);
        // re-seed empties with the farthest point in a cluster of >= 2
        std::vector<bool> taken(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            double best_d = -1.0;
            std::size_t best_i = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i] || sizes[res.labels[i]] < 2) continue;
                const double dd = dist2(pts[i], res.centroids[res.labels[i]]);
                if (dd > best_d) {
                    best_d = dd;
                    best_i = i;
                }
            }
            if (best_i == n) throw numerical_error("k-means: cannot fill empty cluster");
            taken[best_i] = true;
            res.centroids[c] = pts[best_i];
        }
    };

    for (std::size_t it = 0; it < kMaxIter; ++it) {
        update_centroids();
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const int l = nearest(pts[i], res.centroids);
            if (l != res.labels[i]) changed = true;
            res.labels[i] = l;
        }
        if (wcss_trace) {
            double w = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                w += dist2(pts[i], res.centroids[res.labels[i]]);
            wcss_trace->push_back(w);
        }
        if (!changed) break;
    }

    // enforce non-empty clusters, then make centroids exact means and the
    // stored wcss consistent with them
    std::fill(sizes.begin(), sizes.end(), std::size_t(0));
    for (int l : res.labels) ++sizes[l];
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) continue;
        double best_d = -1.0;
        std::size_t best_i = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (sizes[res.labels[i]] < 2) continue;
            const double dd = dist2(pts[i], res.centroids[res.labels[i]]);
            if (dd > best_d) {
                best_d = dd;
                best_i = i;
            }
        }
        if (best_i == n) throw numerical_error("k-means: cannot fill empty cluster");
        --sizes[res.labels[best_i]];
        res.labels[best_i] = int(c);
        ++sizes[c];
    }
    for (auto& c : res.centroids) std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto& c = res.centroids[res.labels[i]];
        for (std::size_t j = 0; j < d; ++j) c[j] += pts[i][j];
    }
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < d; ++j) res.centroids[c][j] /= double(sizes[c]);
    res.wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        res.wcss += dist2(pts[i], res.centroids[res.labels[i]]);
    return res;
}

} // namespace detail

// Best of `restarts` k-means++/Lloyd runs by wcss, ties broken by restart
// index. Restart r uses the seed mix_seed(seed, r), so any execution order
// (including concurrent restarts) returns the same result.
inline ClusterResult kmeans(const PointSet& ps, std::size_t k, std::size_t restarts,
                            std::uint64_t seed, std::size_t parallelism = 1) {
    check_points(ps);
    if (k < 1) throw validation_error("kmeans: k must be >= 1");
    if (restarts < 1) throw validation_error("kmeans: restarts must be >= 1");
    if (ps.size() == 0) throw validation_error("kmeans: empty point set");
    const std::size_t distinct = detail::count_distinct(ps.points);
    if (k > distinct)
        throw validation_error("kmeans: k exceeds the number of distinct points (" +
                               std::to_string(distinct) + ")");

    std::vector<detail::LloydResult> runs(restarts);
    parallel_for(restarts, parallelism, [&](std::size_t r) {
        Rng rng(mix_seed(seed, r));
        runs[r] = detail::lloyd(ps.points, k, rng);
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r)
        if (runs[r].wcss < runs[best].wcss) best = r;

    ClusterResult out;
    out.k = k;
    out.centroids = std::move(runs[best].centroids);
    out.labels = std::move(runs[best].labels);
    out.wcss = runs[best].wcss;
    return out;
}

// Elbow rule on a wcss curve for k = 1..K: the k in [2, K-1] maximizing the
// second difference wcss(k-1) - 2 wcss(k) + wcss(k+1); ties go to smaller k.
inline std::size_t elbow_from_curve(const std::vector<double>& wcss) {
    if (wcss.size() < 3)
        throw validation_error("elbow: need a wcss curve for k_max >= 3");
    std::size_t best_k = 2;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 2; k + 1 <= wcss.size() - 1 + 1 && k <= wcss.size() - 1; ++k) {
        const double d2 = wcss[k - 2] - 2.0 * wcss[k - 1] + wcss[k];
        if (d2 > best) {
            best = d2;
            best_k = k;
        }
    }
    return best_k;
}

// Runs kmeans for k = 1..k_max and applies the elbow rule.
inline std::pair<std::size_t, std::vector<double>> elbow_select(
    const PointSet& ps, std::size_t k_max, std::size_t restarts, std::uint64_t seed,
    std::size_t parallelism = 1) {
    if (k_max < 3) throw validation_error("elbow: k_max must be >= 3");
    std::vector<double> curve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k)
        curve[k - 1] = kmeans(ps, k, restarts, mix_seed(seed, k), parallelism).wcss;
    return {elbow_from_curve(curve), curve};
}

// Cluster labels for a parameter-pair point set, joined back to dates.
struct DatedClusterResult {
    std::vector<Date> dates;
    std::vector<std::string> dim_names;
    ClusterResult cluster;
    std::vector<std::vector<double>> centroids_raw; // original units
    std::vector<double> wcss_curve;                 // filled when the elbow ran
};

// Builds the (dim_a, dim_b) posterior-mean point set from a parameter
// series (missing rows dropped), z-scores it, and clusters with the given k
// or the elbow selection when k is absent.
inline DatedClusterResult pair_cluster(const ParamTimeSeries& series,
                                       const std::string& dim_a, const std::string& dim_b,
                                       std::optional<std::size_t> k,
                                       std::size_t restarts = 50, std::uint64_t seed = 0,
                                       std::size_t k_max = 8, std::size_t parallelism = 1) {
    const auto& names = SvcjParams::names();
    auto find_dim = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (name == names[i]) return i;
        throw validation_error("unknown parameter '" + name + "'");
    };
    const std::size_t ia = find_dim(dim_a);
    const std::size_t ib = find_dim(dim_b);

    DatedClusterResult out;
    out.dim_names = {dim_a, dim_b};

    PointSet ps;
    ps.dim_names = out.dim_names;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!series.rows[i]) continue;
        ps.points.push_back({series.rows[i]->mean[ia], series.rows[i]->mean[ib]});
        ps.dates.push_back(series.dates[i]);
    }
    if (ps.points.empty())
        throw validation_error("pair_cluster: series has no non-missing rows");
    check_points(ps);
    out.dates = ps.dates;

    const std::size_t distinct = detail::count_distinct(ps.points);
    if (distinct == 1) {
        // every row identical: a single cluster, trivially scaled
        out.cluster.k = 1;
        out.cluster.labels.assign(ps.size(), 0);
        out.cluster.centroids = {{0.0, 0.0}};
        out.cluster.wcss = 0.0;
        out.cluster.scaling.mean = ps.points[0];
        out.cluster.scaling.sd = {1.0, 1.0};
        out.centroids_raw = {ps.points[0]};
        return out;
    }

    auto [scaled, scaling] = zscore(ps);

    std::size_t use_k;
    if (k) {
        use_k = *k;
    } else if (distinct < 3 || k_max < 3) {
        use_k = std::min<std::size_t>(distinct, 2);
    } else {
        auto [k_star, curve] =
            elbow_select(scaled, std::min(k_max, distinct), restarts, seed, parallelism);
        out.wcss_curve = std::move(curve);
        use_k = k_star;
    }

    out.cluster = kmeans(scaled, use_k, restarts, seed, parallelism);
    out.cluster.scaling = scaling;
    out.centroids_raw.reserve(out.cluster.k);
    for (const auto& c : out.cluster.centroids) {
        std::vector<double> raw(c.size());
        for (std::size_t j = 0; j < c.size(); ++j)
            raw[j] = scaling.mean[j] + scaling.sd[j] * c[j];
        out.centroids_raw.push_back(std::move(raw));
    }
    return out;
}

} // namespace svcj
