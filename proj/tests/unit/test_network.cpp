#include <doctest.h>

#include <sstream>

#include "lpcm/errors.hpp"
#include "lpcm/network.hpp"

using namespace lpcm;

namespace {

Network parse(const std::string& text, NetworkFormat f, bool directed) {
  std::istringstream in(text);
  return read_network(in, f, directed);
}

std::size_t error_line(const std::string& text, NetworkFormat f, bool directed) {
  try {
    parse(text, f, directed);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("Zachary fixture has 34 actors and 78 ties") {
  const auto net = read_network(std::filesystem::path(LPCM_DATA_DIR) / "zachary.edges", NetworkFormat::edgelist, false);
  CHECK(net.size() == 34);
  CHECK(net.tie_count() == 78);
  CHECK(net.tie(0, 1) == 1);
  CHECK(net.tie(1, 0) == 1);
}

TEST_CASE("edge list with comments and a node directive") {
  const auto net = parse("# nodes 5\n1 2\n\n# a comment\n2 3   \n", NetworkFormat::edgelist, true);
  CHECK(net.size() == 5);
  CHECK(net.tie_count() == 2);
  CHECK(net.tie(0, 1) == 1);
  CHECK(net.tie(1, 0) == 0);
  CHECK(net.dyad_counts(0)[1] == 1.0);
  CHECK(net.dyad_counts(1)[0] == 1.0);
}

TEST_CASE("dyad counts add both directions") {
  const auto net = parse("1 2\n2 1\n2 3\n", NetworkFormat::edgelist, true);
  CHECK(net.dyad_counts(0)[1] == 2.0);
  CHECK(net.dyad_counts(1)[2] == 1.0);
  CHECK(net.dyad_counts(2)[1] == 1.0);
  CHECK(net.dyad_weight() == 2.0);
  CHECK(net.tie_count() == 3);
}

TEST_CASE("undirected edges are symmetrised and deduplicated") {
  const auto net = parse("1 2\n2 1\n", NetworkFormat::edgelist, false);
  CHECK(net.tie_count() == 1);
  CHECK(net.dyad_counts(0)[1] == 1.0);
}

TEST_CASE("adjacency format") {
  const auto net = parse("0,1,0\n0,0,1\n1,0,0\n", NetworkFormat::adjacency, true);
  CHECK(net.size() == 3);
  CHECK(net.tie_count() == 3);
  CHECK(net.tie(2, 0) == 1);
}

TEST_CASE("malformed input reports the offending line") {
  CHECK(error_line("1 2\n3 3\n", NetworkFormat::edgelist, false) == 2);
  CHECK(error_line("1 2\nx 3\n", NetworkFormat::edgelist, false) == 2);
  CHECK(error_line("1 2 3\n", NetworkFormat::edgelist, false) == 1);
  CHECK(error_line("0 1\n", NetworkFormat::edgelist, false) == 1);
  CHECK(error_line("# nodes 3\n1 4\n", NetworkFormat::edgelist, false) == 2);
  CHECK(error_line("0,1\n1,0,0\n", NetworkFormat::adjacency, false) == 2);
  CHECK(error_line("1,0\n0,0\n", NetworkFormat::adjacency, true) == 1);
  CHECK(error_line("0,2\n0,0\n", NetworkFormat::adjacency, true) == 1);
  CHECK_THROWS_AS(parse("0,1\n0,0\n", NetworkFormat::adjacency, false), ParseError);
  CHECK_THROWS_AS(parse("0,1,0\n1,0,0\n", NetworkFormat::adjacency, true), ParseError);
}

TEST_CASE("unknown format and missing file") {
  CHECK_THROWS_AS(parse_network_format("gml"), std::invalid_argument);
  CHECK_THROWS(read_network(std::filesystem::path("/nonexistent/net.edges"), NetworkFormat::edgelist, false));
}

TEST_CASE("programmatic construction validates") {
  CHECK_THROWS_AS(Network::from_adjacency(2, true, {1, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Network::from_adjacency(2, false, {0, 1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Network::from_adjacency(2, true, {0, 1, 0}), std::invalid_argument);
  const std::vector<std::pair<std::size_t, std::size_t>> self{{1, 1}};
  CHECK_THROWS_AS(Network::from_edges(3, true, self), std::invalid_argument);
}

TEST_CASE("edge list and adjacency writers round-trip") {
  for (bool directed : {false, true}) {
    const auto net = parse("# nodes 6\n1 2\n2 3\n4 1\n6 5\n", NetworkFormat::edgelist, directed);
    std::ostringstream e, a;
    write_edgelist(e, net);
    write_adjacency(a, net);
    CHECK(parse(e.str(), NetworkFormat::edgelist, directed) == net);
    CHECK(parse(a.str(), NetworkFormat::adjacency, directed) == net);
  }
}

TEST_CASE("isolated trailing actors survive the edge list round trip") {
  const auto net = Network::from_adjacency(4, false, {0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  std::ostringstream e;
  write_edgelist(e, net);
  CHECK(parse(e.str(), NetworkFormat::edgelist, false).size() == 4);
}

}  // TEST_SUITE
