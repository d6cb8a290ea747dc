#include "wmc/io.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "wmc/mct_assign.h"

namespace wmc {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_value(const std::string& text, const std::string& key) {
  std::istringstream ss(text);
  T value{};
  if (!(ss >> value)) {
    throw InputError("cannot parse value of " + key + ": '" + text + "'");
  }
  std::string rest;
  if (ss >> rest) {
    throw InputError("trailing text after " + key + ": '" + rest + "'");
  }
  return value;
}

int label_number(const std::string& label) {
  if (label.size() < 2 || label.back() != ':') {
    return -1;
  }
  int value = -1;
  const auto res = std::from_chars(label.data(), label.data() + label.size() - 1, value);
  return res.ec == std::errc{} && res.ptr == label.data() + label.size() - 1 ? value : -1;
}

} // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Instance parse_instance(std::istream& in) {
  Instance inst;
  std::map<std::string, std::string> header;
  std::string raw;
  int size = -1;
  bool have_matrix = false;
  std::vector<Distance> matrix_values;
  enum class Section { Header, Nodes, Matrix, Done } section = Section::Header;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (line.empty()) {
      continue;
    }
    if (line == "EOF") {
      section = Section::Done;
      break;
    }
    if (line == "NODES") {
      section = Section::Nodes;
      continue;
    }
    if (line == "MATRIX") {
      section = Section::Matrix;
      have_matrix = true;
      continue;
    }
    std::istringstream ss(line);
    switch (section) {
    case Section::Header: {
      std::string key;
      ss >> key;
      std::string value;
      std::getline(ss >> std::ws, value);
      if (value.empty()) {
        throw InputError("line " + std::to_string(line_no) + ": missing value for " + key);
      }
      header[key] = value;
      break;
    }
    case Section::Nodes: {
      Node node;
      if (!(ss >> node.id >> node.x >> node.y >> node.demand)) {
        throw InputError("line " + std::to_string(line_no) + ": malformed node line");
      }
      inst.nodes.push_back(node);
      break;
    }
    case Section::Matrix: {
      Distance d = 0;
      while (ss >> d) {
        matrix_values.push_back(d);
      }
      if (!ss.eof()) {
        throw InputError("line " + std::to_string(line_no) + ": malformed matrix row");
      }
      break;
    }
    case Section::Done:
      break;
    }
  }
  if (section != Section::Done) {
    throw InputError("missing EOF marker");
  }

  auto need = [&](const std::string& key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) {
      throw InputError("missing header field " + key);
    }
    return it->second;
  };
  inst.name = need("NAME");
  size = parse_value<int>(need("SIZE"), "SIZE");
  auto& p = inst.params;
  p.capacity = parse_value<int>(need("CAPACITY"), "CAPACITY");
  p.mtev_battery = parse_value<double>(need("BATTERY_MTEV"), "BATTERY_MTEV");
  p.mct_battery = parse_value<double>(need("BATTERY_MCT"), "BATTERY_MCT");
  p.gamma = parse_value<double>(need("GAMMA"), "GAMMA");
  p.phi = parse_value<double>(need("PHI"), "PHI");
  p.cost_dist = parse_value<double>(need("COST_DIST"), "COST_DIST");
  p.cost_mtev = parse_value<double>(need("COST_MTEV"), "COST_MTEV");
  p.cost_mct = parse_value<double>(need("COST_MCT"), "COST_MCT");

  if (size < 0 || static_cast<int>(inst.nodes.size()) != size + 1) {
    throw InputError("SIZE " + std::to_string(size) + " but " +
                     std::to_string(inst.nodes.size()) + " node lines");
  }

  if (have_matrix) {
    const std::size_t dim = inst.nodes.size();
    if (matrix_values.size() != dim * (dim + 1) / 2) {
      throw InputError("MATRIX needs " + std::to_string(dim * (dim + 1) / 2) +
                       " lower-diagonal values, got " + std::to_string(matrix_values.size()));
    }
    inst.dist = DistanceMatrix(dim);
    std::size_t k = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        const Distance d = matrix_values[k++];
        if (i == j && d != 0) {
          throw InputError("MATRIX diagonal must be zero");
        }
        inst.dist.set(static_cast<NodeId>(i), static_cast<NodeId>(j), d);
      }
    }
  } else {
    inst.dist = dist_from_coords(inst.nodes);
  }
  inst.check();
  return inst;
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open instance file " + path);
  }
  return parse_instance(in);
}

void write_instance(std::ostream& out, const Instance& inst, bool with_matrix) {
  const auto& p = inst.params;
  out << "NAME " << inst.name << '\n'
      << "SIZE " << inst.customer_count() << '\n'
      << "CAPACITY " << p.capacity << '\n'
      << "BATTERY_MTEV " << format_number(p.mtev_battery) << '\n'
      << "BATTERY_MCT " << format_number(p.mct_battery) << '\n'
      << "GAMMA " << format_number(p.gamma) << '\n'
      << "PHI " << format_number(p.phi) << '\n'
      << "COST_DIST " << format_number(p.cost_dist) << '\n'
      << "COST_MTEV " << format_number(p.cost_mtev) << '\n'
      << "COST_MCT " << format_number(p.cost_mct) << '\n'
      << "NODES\n";
  for (const auto& n : inst.nodes) {
    out << n.id << ' ' << format_number(n.x) << ' ' << format_number(n.y) << ' ' << n.demand
        << '\n';
  }
  if (with_matrix) {
    out << "MATRIX\n";
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        out << (j ? " " : "") << inst.tau(static_cast<NodeId>(i), static_cast<NodeId>(j));
      }
      out << '\n';
    }
  }
  out << "EOF\n";
}

void write_solution(std::ostream& out, const Solution& sol) {
  for (std::size_t r = 0; r < sol.routes.size(); ++r) {
    out << "ROUTE " << r + 1 << ": 0";
    for (NodeId v : sol.routes[r].visits) {
      out << ' ' << v;
    }
    const auto mask = r < sol.plans.size() ? sol.plans[r].mask : 0;
    out << " 0 | MASK 0x" << std::hex << mask << std::dec << '\n';
  }
  for (std::size_t b = 0; b < sol.tours.size(); ++b) {
    out << "MCT " << b + 1 << ':';
    for (const auto& job : sol.tours[b].jobs) {
      out << " (" << job.route + 1 << ',' << job.edge << ')';
    }
    out << '\n';
  }
  const auto& c = sol.cost;
  out << "COST dist=" << format_number(c.dist_cost) << " mtev=" << format_number(c.mtev_cost)
      << " mct=" << format_number(c.mct_cost) << " total=" << format_number(c.total) << '\n';
}

Solution parse_solution(std::istream& in, const Instance& instance) {
  Solution sol;
  std::vector<std::vector<std::pair<int, int>>> tour_refs;
  std::string raw;
  int line_no = 0;
  bool have_cost = false;
  auto fail = [&](const std::string& what) {
    throw InputError("solution line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip_comment(raw);
    if (line.empty()) {
      continue;
    }
    std::istringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "ROUTE") {
      std::string label;
      ss >> label;
      if (label_number(label) != static_cast<int>(sol.routes.size()) + 1) {
        fail("routes must be numbered 1, 2, ... in order");
      }
      std::vector<NodeId> walk;
      std::string tok;
      while (ss >> tok && tok != "|") {
        walk.push_back(parse_value<NodeId>(tok, "route node"));
      }
      if (tok != "|" || walk.size() < 2 || walk.front() != kDepot || walk.back() != kDepot) {
        fail("route must read '0 ... 0 | MASK <hex>'");
      }
      std::string mask_key;
      std::string mask_text;
      ss >> mask_key >> mask_text;
      if (mask_key != "MASK" || mask_text.empty()) {
        fail("missing MASK");
      }
      if (mask_text.rfind("0x", 0) == 0 || mask_text.rfind("0X", 0) == 0) {
        mask_text = mask_text.substr(2);
      }
      std::uint64_t mask = 0;
      const auto res =
          std::from_chars(mask_text.data(), mask_text.data() + mask_text.size(), mask, 16);
      if (res.ec != std::errc{} || res.ptr != mask_text.data() + mask_text.size()) {
        fail("bad mask '" + mask_text + "'");
      }
      sol.routes.push_back(Route{{walk.begin() + 1, walk.end() - 1}});
      sol.plans.push_back(ChargePlan{mask});
    } else if (kind == "MCT") {
      std::string label;
      ss >> label;
      if (label_number(label) != static_cast<int>(tour_refs.size()) + 1) {
        fail("MCT tours must be numbered 1, 2, ... in order");
      }
      std::vector<std::pair<int, int>> refs;
      std::string tok;
      while (ss >> tok) {
        int route = 0;
        int edge = 0;
        char tail = 0;
        if (std::sscanf(tok.c_str(), "(%d,%d%c", &route, &edge, &tail) != 3 || tail != ')') {
          fail("bad job '" + tok + "'");
        }
        refs.emplace_back(route, edge);
      }
      tour_refs.push_back(std::move(refs));
    } else if (kind == "COST") {
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
          fail("bad cost field '" + tok + "'");
        }
        const std::string key = tok.substr(0, eq);
        const double v = parse_value<double>(tok.substr(eq + 1), key);
        if (key == "dist") {
          sol.cost.dist_cost = v;
        } else if (key == "mtev") {
          sol.cost.mtev_cost = v;
        } else if (key == "mct") {
          sol.cost.mct_cost = v;
        } else if (key == "total") {
          sol.cost.total = v;
        } else {
          fail("unknown cost field '" + key + "'");
        }
      }
      have_cost = true;
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  if (!have_cost) {
    throw InputError("solution has no COST line");
  }

  for (const auto& refs : tour_refs) {
    MctTour tour;
    for (const auto& [route, edge] : refs) {
      if (route < 1 || route > static_cast<int>(sol.routes.size()) || edge < 1 ||
          static_cast<std::size_t>(edge) > sol.routes[static_cast<std::size_t>(route - 1)].edge_count()) {
        throw InputError("MCT job (" + std::to_string(route) + "," + std::to_string(edge) +
                         ") references a missing route edge");
      }
      const auto& r = sol.routes[static_cast<std::size_t>(route - 1)];
      bool ids_ok = true;
      for (NodeId v : r.visits) {
        ids_ok = ids_ok && v > kDepot && v <= instance.customer_count();
      }
      if (!ids_ok) {
        throw InputError("route " + std::to_string(route) + " has invalid node ids");
      }
      tour.jobs.push_back(make_job(route - 1, r, static_cast<std::size_t>(edge), instance));
    }
    sol.tours.push_back(std::move(tour));
  }
  return sol;
}

Solution read_solution(const std::string& path, const Instance& instance) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open solution file " + path);
  }
  return parse_solution(in, instance);
}

} // namespace wmc
