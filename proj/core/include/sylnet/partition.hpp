#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sylnet/dense_matrix.hpp"

namespace sylnet {

/// Left-Row-Right-Column split of the problem: agent i owns m_i rows of A
/// and r_i columns of B and C.
class BlockPartition {
public:
    BlockPartition(std::vector<std::size_t> row_sizes, std::vector<std::size_t> col_sizes);

    /// Equal blocks, remainder assigned to the last agent.
    static BlockPartition equal_blocks(std::size_t m, std::size_t r, std::size_t n);

    std::size_t agent_count() const { return row_sizes_.size(); }
    std::size_t total_rows() const { return row_offsets_.back(); }
    std::size_t total_cols() const { return col_offsets_.back(); }

    std::size_t row_size(std::size_t i) const { return row_sizes_.at(i); }
    std::size_t col_size(std::size_t i) const { return col_sizes_.at(i); }
    std::size_t row_offset(std::size_t i) const { return row_offsets_.at(i); }
    std::size_t col_offset(std::size_t i) const { return col_offsets_.at(i); }

    const std::vector<std::size_t>& row_sizes() const { return row_sizes_; }
    const std::vector<std::size_t>& col_sizes() const { return col_sizes_; }

    friend bool operator==(const BlockPartition&, const BlockPartition&) = default;

private:
    std::vector<std::size_t> row_sizes_;
    std::vector<std::size_t> col_sizes_;
    std::vector<std::size_t> row_offsets_; // size n+1, cumulative
    std::vector<std::size_t> col_offsets_;
};

/// Zero-pads an m_i x r block into the full m x r canvas at agent i's
/// row band.
DenseMatrix embed_row_block(const DenseMatrix& yi, std::size_t i, const BlockPartition& p);

/// Zero-pads an m x r_i block into the full m x r canvas at agent i's
/// column band.
DenseMatrix embed_col_block(const DenseMatrix& zi, std::size_t i, const BlockPartition& p);

/// m_i x m selector; left-multiplying extracts agent i's row band.
DenseMatrix identity_embed_col(std::size_t i, const BlockPartition& p);

/// r x r_i selector; right-multiplying extracts agent i's column band.
DenseMatrix identity_embed_row(std::size_t i, const BlockPartition& p);

/// Agent i's row band of a full m x r matrix (same as the left selector
/// product, computed directly).
DenseMatrix row_band(const DenseMatrix& m, std::size_t i, const BlockPartition& p);

/// Agent i's column band of a full m x r matrix.
DenseMatrix col_band(const DenseMatrix& m, std::size_t i, const BlockPartition& p);

/// One-line text form "m_1 ... m_n / r_1 ... r_n".
std::string format_partition(const BlockPartition& p);
BlockPartition parse_partition(const std::string& line);

} // namespace sylnet
