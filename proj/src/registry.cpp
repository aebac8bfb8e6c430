#include "ddcid/potentials.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace ddcid {

namespace {

std::vector<std::string> split(const std::string& key) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  return parts;
}

int parse_int(const std::string& text, const std::string& key) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("bad integer in problem key: " + key);
  return value;
}

double parse_double(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("bad number in problem key: " + key);
  return value;
}

}  // namespace

Potential make_problem(const std::string& key) {
  const auto parts = split(key);
  if (parts.empty()) throw std::invalid_argument("empty problem key");
  const std::string& head = parts[0];
  const std::size_t args = parts.size() - 1;

  if (args == 0) {
    if (head == "molei") return make_molei();
    if (head == "shubert") return make_shubert();
    if (head == "biggs") return make_biggs();
    if (head == "camel") return make_camel();
    if (head == "boggs") return sum_of_squares(make_boggs());
  }
  if (head == "rosenbrock" && args == 1) return make_rosenbrock(parse_int(parts[1], key));
  if (head == "lj" && args == 1) return make_lennard_jones(parse_int(parts[1], key));
  if (head == "morse" && args == 2) {
    return make_morse(parse_int(parts[1], key), parse_double(parts[2], key));
  }
  throw std::invalid_argument("unknown problem key: " + key);
}

std::vector<ProblemInfo> list_problems() {
  return {
      {"molei", "(x^2-1)^2 + (x^2+y-1)^2; two minima and one saddle"},
      {"shubert", "Shubert product of cosine sums on [-10,10]^2"},
      {"biggs", "Biggs EXP2 least squares; minimum (1,10), saddle (16.7047,16.7047)"},
      {"camel", "six-hump camel on [-2,2]x[-1,1]"},
      {"rosenbrock:<N>", "N-dimensional Rosenbrock valley"},
      {"lj:<d>", "Lennard-Jones cluster of d atoms (3d-6 reduced coordinates)"},
      {"morse:<d>:<rho>", "Morse cluster of d atoms with well width rho"},
      {"boggs", "least-squares form of the Boggs 2x2 nonlinear system"},
  };
}

}  // namespace ddcid
