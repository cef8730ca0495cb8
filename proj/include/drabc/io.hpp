#pragma once

#include "drabc/abc.hpp"
#include "drabc/embeddings.hpp"

#include <string>

namespace drabc {

// Observed-data files: one plain-text numeric row per point, z columns first,
// then x columns. Lines starting with '#' are comments.
void save_split_bag(const SplitBag& bag, const std::string& path);
SplitBag load_split_bag(const std::string& path, int dim_z, int dim_x);

// Posterior files: tab-separated rows "weight theta_0 ... theta_{D-1}".
void save_posterior(const WeightedPosterior& posterior, const std::string& path);
WeightedPosterior load_posterior(const std::string& path);

}  // namespace drabc
