#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace grouprec {

// One row per review text. `ids` are record seq numbers.
struct EmbeddingMatrix {
    std::vector<std::int64_t> ids;
    Eigen::MatrixXd rows;

    Eigen::Index size() const { return rows.rows(); }
    Eigen::Index dim() const { return rows.cols(); }
};

// Symmetric instance-by-instance cosine affinity.
struct SimilarityMatrix {
    Eigen::MatrixXd values;

    Eigen::Index size() const { return values.rows(); }
};

// Lowercases ASCII letters and splits on anything that is not an ASCII
// letter, digit or a non-ASCII byte.
std::vector<std::string> tokenize(const std::string& text);

// L2-normalised TF-IDF rows over the corpus vocabulary (sorted term order),
// raw term counts, smooth idf = ln((1+m)/(1+df)) + 1. Texts with no tokens
// give all-zero rows. Row ids default to 0..m-1.
EmbeddingMatrix embed_tfidf(const std::vector<std::string>& texts);
EmbeddingMatrix embed_tfidf(const std::vector<std::string>& texts, std::vector<std::int64_t> ids);

// Reads {"id": <int>, "vector": [...]} per line. Rows keep file order.
EmbeddingMatrix load_vectors(const std::filesystem::path& path);

// Writes the format read by load_vectors.
void save_vectors(const EmbeddingMatrix& emb, const std::filesystem::path& path);

// values(i,j) = cos(row_i, row_j); 0 whenever either row is all-zero,
// including the diagonal entry of a zero row.
SimilarityMatrix cosine_similarity_matrix(const EmbeddingMatrix& emb);

}  // namespace grouprec
