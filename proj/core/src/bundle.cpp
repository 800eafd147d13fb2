#include "sylnet/bundle.hpp"

#include <fstream>
#include <sstream>

#include "sylnet/matrix_io.hpp"

namespace sylnet {

namespace {

std::string read_line(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw io_error("bundle: cannot open " + path.string());
    std::string line;
    std::getline(is, line);
    return line;
}

void write_line(const std::filesystem::path& path, const std::string& line) {
    std::ofstream os(path);
    if (!os) throw io_error("bundle: cannot open " + path.string());
    os << line << '\n';
}

} // namespace

std::string format_penalty(const PenaltySpec& penalty) {
    if (penalty.kind == PenaltyKind::none) return "none";
    return "l1 " + format_double(penalty.alpha);
}

PenaltySpec parse_penalty(const std::string& line) {
    std::istringstream is(line);
    std::string kind;
    is >> kind;
    if (kind == "none" || kind.empty()) return PenaltySpec::none();
    if (kind == "l1") {
        double alpha = 0.0;
        if (!(is >> alpha)) throw io_error("penalty: missing l1 weight");
        return PenaltySpec::l1(alpha);
    }
    throw io_error("penalty: unknown kind '" + kind + "'");
}

void write_problem_bundle(const std::filesystem::path& dir, const SylvesterProblem& prob,
                          const DenseMatrix* x_star) {
    std::filesystem::create_directories(dir);
    write_matrix(dir / "A.mat", prob.A);
    write_matrix(dir / "B.mat", prob.B);
    write_matrix(dir / "C.mat", prob.C);
    write_line(dir / "partition.txt", format_partition(prob.partition));
    write_network(dir / "graph.txt", prob.network);
    write_line(dir / "penalty.txt", format_penalty(prob.penalty));
    if (x_star) write_matrix(dir / "X_star.mat", *x_star);
}

SylvesterProblem read_problem_bundle(const std::filesystem::path& dir) {
    DenseMatrix a = read_matrix(dir / "A.mat");
    DenseMatrix b = read_matrix(dir / "B.mat");
    DenseMatrix c = read_matrix(dir / "C.mat");
    BlockPartition part = parse_partition(read_line(dir / "partition.txt"));
    Network net = read_network(dir / "graph.txt");
    PenaltySpec pen = parse_penalty(read_line(dir / "penalty.txt"));
    return SylvesterProblem(std::move(a), std::move(b), std::move(c), std::move(part),
                            std::move(net), pen);
}

std::optional<DenseMatrix> read_bundle_reference(const std::filesystem::path& dir) {
    const auto path = dir / "X_star.mat";
    if (!std::filesystem::exists(path)) return std::nullopt;
    return read_matrix(path);
}

} // namespace sylnet
