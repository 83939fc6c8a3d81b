#include "orbitkit/serialize.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace orbitkit {

namespace {

std::vector<int> mask_points(Mask m) {
  std::vector<int> out;
  for (int x = 0; x < 31; ++x)
    if (mask_contains(m, x)) out.push_back(x);
  return out;
}

void write_points(std::ostringstream& os, const std::vector<int>& pts) {
  for (int x : pts) os << ' ' << x;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string write_instance(const FiniteInstance& inst) {
  std::ostringstream os;
  os << "space " << inst.space.n << '\n';
  for (Mask m : inst.space.opens) {
    os << "open";
    write_points(os, mask_points(m));
    os << '\n';
  }
  if (inst.map) {
    os << "map\n";
    for (std::size_t x = 0; x < inst.map->images.size(); ++x) {
      os << "image " << x << " :";
      write_points(os, mask_points(inst.map->images[x]));
      os << '\n';
    }
  }
  if (inst.orbit) {
    os << "orbit\n";
    if (!inst.orbit->tail.empty()) {
      os << "tail";
      write_points(os, inst.orbit->tail);
      os << '\n';
    }
    os << "cycle";
    write_points(os, inst.orbit->cycle);
    os << '\n';
  }
  return os.str();
}

FiniteInstance read_instance(const std::string& text) {
  FiniteInstance inst;
  enum class Section { Preamble, Space, Map, Orbit } section = Section::Preamble;
  std::vector<std::optional<Mask>> images;
  bool saw_tail = false, saw_cycle = false;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;  // blank or comment-only line

    auto read_point = [&](int& out) {
      if (!(ls >> out)) fail(line_no, "expected a point index");
      if (out < 0 || out >= inst.space.n)
        fail(line_no, "point " + std::to_string(out) + " outside carrier 0.." +
                          std::to_string(inst.space.n - 1));
    };
    auto read_point_list = [&] {
      std::vector<int> pts;
      int x;
      while (ls >> x) {
        if (x < 0 || x >= inst.space.n)
          fail(line_no, "point " + std::to_string(x) + " outside carrier 0.." +
                            std::to_string(inst.space.n - 1));
        pts.push_back(x);
      }
      if (!ls.eof()) fail(line_no, "expected a point index");
      return pts;
    };

    if (head == "space") {
      if (section != Section::Preamble) fail(line_no, "second 'space' line");
      int n;
      if (!(ls >> n) || n < 1 || n > 31) fail(line_no, "carrier size must be in 1..31");
      inst.space.n = n;
      section = Section::Space;
    } else if (head == "open") {
      if (section != Section::Space) fail(line_no, "'open' outside the space section");
      Mask m = 0;
      for (int x : read_point_list()) m |= point_bit(x);
      inst.space.opens.push_back(m);
    } else if (head == "map") {
      if (section != Section::Space) fail(line_no, "'map' must follow the opens");
      images.assign(static_cast<std::size_t>(inst.space.n), std::nullopt);
      section = Section::Map;
    } else if (head == "image") {
      if (section != Section::Map) fail(line_no, "'image' outside the map section");
      int x;
      read_point(x);
      std::string colon;
      if (!(ls >> colon) || colon != ":") fail(line_no, "expected ':' after the point");
      if (images[static_cast<std::size_t>(x)])
        fail(line_no, "image for point " + std::to_string(x) + " given twice");
      Mask m = 0;
      for (int y : read_point_list()) m |= point_bit(y);
      images[static_cast<std::size_t>(x)] = m;
    } else if (head == "orbit") {
      if (section != Section::Map) fail(line_no, "'orbit' requires a map section");
      section = Section::Orbit;
    } else if (head == "tail") {
      if (section != Section::Orbit) fail(line_no, "'tail' outside the orbit section");
      if (saw_tail) fail(line_no, "second 'tail' line");
      inst.orbit.emplace();
      inst.orbit->tail = read_point_list();
      saw_tail = true;
    } else if (head == "cycle") {
      if (section != Section::Orbit) fail(line_no, "'cycle' outside the orbit section");
      if (saw_cycle) fail(line_no, "second 'cycle' line");
      if (!inst.orbit) inst.orbit.emplace();
      inst.orbit->cycle = read_point_list();
      if (inst.orbit->cycle.empty()) fail(line_no, "cycle must be nonempty");
      saw_cycle = true;
    } else {
      fail(line_no, "unknown directive '" + head + "'");
    }
  }

  if (section == Section::Preamble) throw std::invalid_argument("missing 'space' line");
  std::sort(inst.space.opens.begin(), inst.space.opens.end());
  inst.space.validate();

  if (section == Section::Map || section == Section::Orbit) {
    FiniteSetMap map;
    for (int x = 0; x < inst.space.n; ++x) {
      if (!images[static_cast<std::size_t>(x)])
        throw std::invalid_argument("no image line for point " + std::to_string(x));
      map.images.push_back(*images[static_cast<std::size_t>(x)]);
    }
    inst.map = std::move(map);
  }
  if (section == Section::Orbit) {
    if (!saw_cycle) throw std::invalid_argument("orbit section without a 'cycle' line");
    validate_orbit(inst.space, *inst.map, *inst.orbit);
  }
  return inst;
}

}  // namespace orbitkit
