#include "sylnet/partition.hpp"

#include <sstream>

namespace sylnet {

namespace {

std::vector<std::size_t> cumulate(const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> off(sizes.size() + 1, 0);
    for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
    return off;
}

} // namespace

BlockPartition::BlockPartition(std::vector<std::size_t> row_sizes,
                               std::vector<std::size_t> col_sizes)
    : row_sizes_(std::move(row_sizes)), col_sizes_(std::move(col_sizes)) {
    if (row_sizes_.empty() || row_sizes_.size() != col_sizes_.size())
        throw validation_error("BlockPartition: row and column size lists must be nonempty and of equal length");
    for (std::size_t s : row_sizes_)
        if (s == 0) throw validation_error("BlockPartition: zero row block");
    for (std::size_t s : col_sizes_)
        if (s == 0) throw validation_error("BlockPartition: zero column block");
    row_offsets_ = cumulate(row_sizes_);
    col_offsets_ = cumulate(col_sizes_);
}

BlockPartition BlockPartition::equal_blocks(std::size_t m, std::size_t r, std::size_t n) {
    if (n == 0 || m < n || r < n)
        throw validation_error("equal_blocks: need n >= 1 and m, r >= n");
    std::vector<std::size_t> rs(n, m / n), cs(n, r / n);
    rs.back() += m % n;
    cs.back() += r % n;
    return BlockPartition(std::move(rs), std::move(cs));
}

DenseMatrix embed_row_block(const DenseMatrix& yi, std::size_t i, const BlockPartition& p) {
    if (i >= p.agent_count()) throw dimension_error("embed_row_block: agent index out of range");
    if (yi.rows() != p.row_size(i) || yi.cols() != p.total_cols())
        throw dimension_error("embed_row_block: block must be m_i x r");
    DenseMatrix out(p.total_rows(), p.total_cols());
    out.set_block(p.row_offset(i), 0, yi);
    return out;
}

DenseMatrix embed_col_block(const DenseMatrix& zi, std::size_t i, const BlockPartition& p) {
    if (i >= p.agent_count()) throw dimension_error("embed_col_block: agent index out of range");
    if (zi.rows() != p.total_rows() || zi.cols() != p.col_size(i))
        throw dimension_error("embed_col_block: block must be m x r_i");
    DenseMatrix out(p.total_rows(), p.total_cols());
    out.set_block(0, p.col_offset(i), zi);
    return out;
}

DenseMatrix identity_embed_col(std::size_t i, const BlockPartition& p) {
    if (i >= p.agent_count()) throw dimension_error("identity_embed_col: agent index out of range");
    DenseMatrix sel(p.row_size(i), p.total_rows());
    for (std::size_t k = 0; k < p.row_size(i); ++k) sel(k, p.row_offset(i) + k) = 1.0;
    return sel;
}

DenseMatrix identity_embed_row(std::size_t i, const BlockPartition& p) {
    if (i >= p.agent_count()) throw dimension_error("identity_embed_row: agent index out of range");
    DenseMatrix sel(p.total_cols(), p.col_size(i));
    for (std::size_t k = 0; k < p.col_size(i); ++k) sel(p.col_offset(i) + k, k) = 1.0;
    return sel;
}

DenseMatrix row_band(const DenseMatrix& m, std::size_t i, const BlockPartition& p) {
    if (m.rows() != p.total_rows())
        throw dimension_error("row_band: matrix rows do not match partition");
    return m.block(p.row_offset(i), 0, p.row_size(i), m.cols());
}

DenseMatrix col_band(const DenseMatrix& m, std::size_t i, const BlockPartition& p) {
    if (m.cols() != p.total_cols())
        throw dimension_error("col_band: matrix cols do not match partition");
    return m.block(0, p.col_offset(i), m.rows(), p.col_size(i));
}

std::string format_partition(const BlockPartition& p) {
    std::ostringstream os;
    for (std::size_t i = 0; i < p.agent_count(); ++i) {
        if (i) os << ' ';
        os << p.row_size(i);
    }
    os << " / ";
    for (std::size_t i = 0; i < p.agent_count(); ++i) {
        if (i) os << ' ';
        os << p.col_size(i);
    }
    return os.str();
}

BlockPartition parse_partition(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::size_t> rs, cs;
    std::string tok;
    bool after_slash = false;
    while (is >> tok) {
        if (tok == "/") {
            after_slash = true;
            continue;
        }
        std::size_t v = 0;
        try {
            v = std::stoul(tok);
        } catch (const std::exception&) {
            throw io_error("parse_partition: bad token '" + tok + "'");
        }
        (after_slash ? cs : rs).push_back(v);
    }
    if (!after_slash) throw io_error("parse_partition: missing '/' separator");
    return BlockPartition(std::move(rs), std::move(cs));
}

} // namespace sylnet
