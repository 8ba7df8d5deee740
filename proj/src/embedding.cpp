#include "grouprec/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "grouprec/csv.hpp"
#include "grouprec/error.hpp"

namespace grouprec {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        const auto byte = static_cast<unsigned char>(ch);
        if (byte >= 0x80 || std::isalnum(byte)) {
            current.push_back(static_cast<char>(byte < 0x80 ? std::tolower(byte) : byte));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

EmbeddingMatrix embed_tfidf(const std::vector<std::string>& texts) {
    std::vector<std::int64_t> ids(texts.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int64_t>(i);
    return embed_tfidf(texts, std::move(ids));
}

EmbeddingMatrix embed_tfidf(const std::vector<std::string>& texts, std::vector<std::int64_t> ids) {
    if (texts.empty()) throw std::invalid_argument("embed_tfidf: no texts");
    if (ids.size() != texts.size()) throw std::invalid_argument("embed_tfidf: ids/texts length mismatch");

    std::vector<std::map<std::string, int>> counts(texts.size());
    std::map<std::string, int> doc_freq;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        for (auto& tok : tokenize(texts[i])) ++counts[i][std::move(tok)];
        for (const auto& [term, _] : counts[i]) ++doc_freq[term];
    }

    std::map<std::string, Eigen::Index> column;
    for (const auto& [term, _] : doc_freq) column.emplace(term, static_cast<Eigen::Index>(column.size()));

    const auto m = static_cast<Eigen::Index>(texts.size());
    // A corpus of stopword-free empty texts still needs a positive dimension.
    const Eigen::Index dim = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(column.size()));
    EmbeddingMatrix emb;
    emb.ids = std::move(ids);
    emb.rows = Eigen::MatrixXd::Zero(m, dim);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (const auto& [term, tf] : counts[static_cast<std::size_t>(i)]) {
            const double idf =
                std::log((1.0 + static_cast<double>(m)) / (1.0 + static_cast<double>(doc_freq[term]))) + 1.0;
            emb.rows(i, column[term]) = static_cast<double>(tf) * idf;
        }
        const double norm = emb.rows.row(i).norm();
        if (norm > 0.0) emb.rows.row(i) /= norm;
    }
    return emb;
}

EmbeddingMatrix load_vectors(const std::filesystem::path& path) {
    const std::string text = csv::read_text_file(path);
    if (!csv::valid_utf8(text)) throw DataError("invalid UTF-8 in " + path.string());

    std::vector<std::int64_t> ids;
    std::vector<std::vector<double>> vectors;
    std::set<std::int64_t> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(where + "malformed JSON: " + e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj.contains("vector"))
            throw DataError(where + "expected {\"id\", \"vector\"}");
        const auto& id = obj["id"];
        if (!id.is_number_integer()) throw DataError(where + "id must be an integer");
        const auto& vec = obj["vector"];
        if (!vec.is_array() || vec.empty()) throw DataError(where + "vector must be a non-empty array");

        std::vector<double> row;
        row.reserve(vec.size());
        for (const auto& v : vec) {
            if (!v.is_number()) throw DataError(where + "vector entries must be numbers");
            const double x = v.get<double>();
            if (!std::isfinite(x)) throw DataError(where + "non-finite vector entry");
            row.push_back(x);
        }
        if (!vectors.empty() && row.size() != vectors.front().size())
            throw DataError(where + "ragged vector length " + std::to_string(row.size()) + ", expected " +
                            std::to_string(vectors.front().size()));
        const auto id_value = id.get<std::int64_t>();
        if (!seen.insert(id_value).second) throw DataError(where + "duplicate id " + std::to_string(id_value));
        ids.push_back(id_value);
        vectors.push_back(std::move(row));
    }
    if (vectors.empty()) throw DataError(path.string() + ": no vectors");

    EmbeddingMatrix emb;
    emb.ids = std::move(ids);
    emb.rows.resize(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(vectors.front().size()));
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = 0; j < vectors[i].size(); ++j)
            emb.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vectors[i][j];
    return emb;
}

void save_vectors(const EmbeddingMatrix& emb, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (Eigen::Index i = 0; i < emb.size(); ++i) {
        nlohmann::json line;
        line["id"] = emb.ids[static_cast<std::size_t>(i)];
        std::vector<double> row(emb.rows.row(i).begin(), emb.rows.row(i).end());
        line["vector"] = row;
        out << line.dump() << '\n';
    }
}

SimilarityMatrix cosine_similarity_matrix(const EmbeddingMatrix& emb) {
    const Eigen::Index m = emb.size();
    const Eigen::VectorXd norms = emb.rows.rowwise().norm();
    SimilarityMatrix sim;
    sim.values = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (norms(i) == 0.0) continue;
        for (Eigen::Index j = i; j < m; ++j) {
            if (norms(j) == 0.0) continue;
            double v = i == j ? 1.0 : emb.rows.row(i).dot(emb.rows.row(j)) / (norms(i) * norms(j));
            v = std::clamp(v, -1.0, 1.0);
            sim.values(i, j) = v;
            sim.values(j, i) = v;
        }
    }
    return sim;
}

}  // namespace grouprec
