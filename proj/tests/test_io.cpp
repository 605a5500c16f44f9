#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "blockspec/blockspec.hpp"

using namespace blockspec;

TEST_CASE("edge list round trip") {
    auto model = make_planted(BlockParams{25, 0.6, 0.2, {}, 2}, 44);
    const Matrix a = sample_ssbm(model);
    std::ostringstream os;
    write_edge_list(os, a);
    std::istringstream is(os.str());
    const Matrix back = read_edge_list(is, 25);
    CHECK((a - back).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("each undirected edge is stored once, u <= v") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = a(1, 0) = 1.0;
    a(2, 2) = 1.0;
    std::ostringstream os;
    write_edge_list(os, a);
    CHECK(os.str() == "0 1\n2 2\n");
}

TEST_CASE("vertex count inference and comments") {
    std::istringstream is("# header\n0 1\n\n1 4\n");
    const Matrix a = read_edge_list(is);
    CHECK(a.rows() == 5);
    CHECK(a(0, 1) == 1.0);
    CHECK(a(4, 1) == 1.0);
    CHECK(a(2, 3) == 0.0);
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream bad("0 1\nnot an edge\n");
    CHECK_THROWS_WITH_AS(read_edge_list(bad), doctest::Contains("line 2"), std::runtime_error);
    std::istringstream neg("0 -1\n");
    CHECK_THROWS_AS(read_edge_list(neg), std::runtime_error);
    std::istringstream over("0 9\n");
    CHECK_THROWS_AS(read_edge_list(over, 5), std::runtime_error);
}

TEST_CASE("labels round trip through a temp file") {
    const std::vector<int> labels{0, 2, 1, 1, 0};
    const std::string path = "io_test_labels.tmp";
    write_labels_file(path, labels);
    CHECK(read_labels_file(path) == labels);
    std::remove(path.c_str());
}
