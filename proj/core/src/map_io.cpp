#include "vlc/map_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "vlc/error.hpp"

namespace vlc {

namespace {

std::string hex(double d) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", d);
  return buf;
}

std::string fixed(double d) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", d);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::istringstream line(const std::string& tag) {
    std::string text;
    if (!std::getline(in_, text)) fail("unexpected end of file, wanted '" + tag + "'");
    ++lineno_;
    std::istringstream is(text);
    std::string word;
    is >> word;
    if (word != tag) fail("expected '" + tag + "', found '" + word + "'");
    return is;
  }

  double real(std::istringstream& is) {
    std::string tok;
    if (!(is >> tok)) fail("missing number");
    char* end = nullptr;
    const double d = std::strtod(tok.c_str(), &end);
    if (*end != '\0') fail("bad number '" + tok + "'");
    return d;
  }

  template <class T>
  T integer(std::istringstream& is) {
    long long v;
    if (!(is >> v)) fail("missing integer");
    return static_cast<T>(v);
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("map file line " + std::to_string(lineno_) + ": " + what);
  }

 private:
  std::istream& in_;
  int lineno_ = 0;
};

}  // namespace

void write_map(std::ostream& out, const DecodingMap& map) {
  const std::size_t n_tx = map.cells.empty() ? 0 : map.cells.front().gains.size();
  const std::size_t n_layers = map.cells.empty() ? 0 : map.cells.front().order.rates.size();
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, map.scene_hash);
  out << "vlcmap 1\n";
  out << "scene_hash " << hash << "\n";
  out << "filter " << map.filter + 1 << "\n";
  out << "grid " << map.grid.nx << ' ' << map.grid.ny << ' ' << hex(map.grid.spacing) << ' '
      << hex(map.grid.height) << "\n";
  out << "world_offset " << hex(map.world_offset.x) << ' ' << hex(map.world_offset.y) << ' '
      << hex(map.world_offset.z) << "\n";
  out << "tau " << map.tau << "\n";
  out << "noise_var " << hex(map.noise_var) << "\n";
  out << "thresholds " << hex(map.tau_diff) << ' ' << hex(map.tau_loss) << "\n";
  out << "transmitters " << n_tx << "\n";
  out << "layers " << n_layers << "\n";
  out << "cells " << map.cells.size() << "\n";
  for (const auto& c : map.cells) {
    out << "cell " << c.ix << ' ' << c.iy << ' ' << (c.outage() ? 1 : 0) << ' ' << c.cluster << ' '
        << (c.provenance == Provenance::Computed ? 'C' : 'D') << ' ' << c.source << ' '
        << c.transform.swap << ' ' << c.transform.flip_x << ' ' << c.transform.flip_y << "\n";
    out << "gains";
    for (double g : c.gains) out << ' ' << hex(g);
    out << "\ndetectable " << c.order.detectable.size();
    for (auto l : c.order.detectable) out << ' ' << l + 1;
    out << "\ngroups " << c.order.groups.size();
    for (const auto& g : c.order.groups) {
      out << " |";
      for (auto l : g) out << ' ' << l + 1;
    }
    out << "\nrates";
    for (double r : c.order.rates) out << ' ' << hex(r);
    out << "\n";
  }
  out << "end\n";
}

DecodingMap read_map(std::istream& in) {
  Reader rd(in);
  DecodingMap map;
  {
    auto is = rd.line("vlcmap");
    if (rd.integer<int>(is) != 1) rd.fail("unsupported map format version");
  }
  {
    auto is = rd.line("scene_hash");
    std::string h;
    is >> h;
    map.scene_hash = std::strtoull(h.c_str(), nullptr, 16);
  }
  {
    auto is = rd.line("filter");
    const auto f = rd.integer<long long>(is);
    if (f < 1) rd.fail("filter index is 1-based");
    map.filter = static_cast<std::size_t>(f - 1);
  }
  {
    auto is = rd.line("grid");
    map.grid.nx = rd.integer<std::size_t>(is);
    map.grid.ny = rd.integer<std::size_t>(is);
    map.grid.spacing = rd.real(is);
    map.grid.height = rd.real(is);
  }
  {
    auto is = rd.line("world_offset");
    map.world_offset.x = rd.real(is);
    map.world_offset.y = rd.real(is);
    map.world_offset.z = rd.real(is);
  }
  {
    auto is = rd.line("tau");
    map.tau = rd.integer<std::size_t>(is);
  }
  {
    auto is = rd.line("noise_var");
    map.noise_var = rd.real(is);
  }
  {
    auto is = rd.line("thresholds");
    map.tau_diff = rd.real(is);
    map.tau_loss = rd.real(is);
  }
  std::size_t n_tx, n_layers, n_cells;
  {
    auto is = rd.line("transmitters");
    n_tx = rd.integer<std::size_t>(is);
  }
  {
    auto is = rd.line("layers");
    n_layers = rd.integer<std::size_t>(is);
  }
  {
    auto is = rd.line("cells");
    n_cells = rd.integer<std::size_t>(is);
  }
  if (n_cells != map.grid.size()) rd.fail("cell count does not match the grid");
  auto layer = [&](long long v) {
    if (v < 1 || static_cast<std::size_t>(v) > n_layers) rd.fail("layer index out of range");
    return static_cast<std::size_t>(v - 1);
  };
  map.cells.resize(n_cells);
  for (auto& c : map.cells) {
    bool outage;
    {
      auto is = rd.line("cell");
      c.ix = rd.integer<std::size_t>(is);
      c.iy = rd.integer<std::size_t>(is);
      outage = rd.integer<int>(is) != 0;
      c.cluster = rd.integer<long>(is);
      std::string prov;
      is >> prov;
      if (prov != "C" && prov != "D") rd.fail("provenance must be C or D");
      c.provenance = prov == "C" ? Provenance::Computed : Provenance::Derived;
      c.source = rd.integer<std::size_t>(is);
      c.transform.swap = rd.integer<int>(is) != 0;
      c.transform.flip_x = rd.integer<int>(is) != 0;
      c.transform.flip_y = rd.integer<int>(is) != 0;
      if (c.ix >= map.grid.nx || c.iy >= map.grid.ny) rd.fail("cell outside the grid");
      c.local = map.grid.local(c.ix, c.iy);
      c.order.outage = outage;
    }
    {
      auto is = rd.line("gains");
      c.gains.resize(n_tx);
      for (auto& g : c.gains) g = rd.real(is);
    }
    {
      auto is = rd.line("detectable");
      const auto n = rd.integer<std::size_t>(is);
      c.order.detectable.resize(n);
      for (auto& l : c.order.detectable) l = layer(rd.integer<long long>(is));
    }
    {
      auto is = rd.line("groups");
      const auto p = rd.integer<std::size_t>(is);
      std::string tok;
      while (is >> tok) {
        if (tok == "|") {
          c.order.groups.emplace_back();
        } else {
          if (c.order.groups.empty()) rd.fail("group entry before '|'");
          c.order.groups.back().push_back(layer(std::strtoll(tok.c_str(), nullptr, 10)));
        }
      }
      if (c.order.groups.size() != p) rd.fail("group count mismatch");
    }
    {
      auto is = rd.line("rates");
      c.order.rates.resize(n_layers);
      for (auto& r : c.order.rates) r = rd.real(is);
    }
  }
  rd.line("end");
  return map;
}

void save_map(const std::string& path, const DecodingMap& map) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_map(out, map);
}

DecodingMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open map file '" + path + "'");
  return read_map(in);
}

void write_map_csv(std::ostream& out, const DecodingMap& map) {
  out << "ix,iy,x,y,z,outage,cluster,provenance,source_ix,source_iy,groups,min_rate,sum_rate\n";
  for (const auto& c : map.cells) {
    const Vec3 w = map.world(c);
    const auto& s = map.cells[c.source];
    out << c.ix << ',' << c.iy << ',' << fixed(w.x) << ',' << fixed(w.y) << ',' << fixed(w.z)
        << ',' << (c.outage() ? 1 : 0) << ',' << c.cluster << ','
        << (c.provenance == Provenance::Computed ? "computed" : "derived") << ',' << s.ix << ','
        << s.iy << ',' << c.order.groups.size() << ',' << fixed(c.order.min_rate()) << ','
        << fixed(c.order.sum_rate()) << '\n';
  }
}

void write_rate_csv(std::ostream& out, const DecodingMap& map) {
  out << "ix,iy,x,y,layer,stage,rate\n";
  for (const auto& c : map.cells) {
    const Vec3 w = map.world(c);
    for (std::size_t m = 0; m < c.order.groups.size(); ++m) {
      for (auto l : c.order.groups[m]) {
        out << c.ix << ',' << c.iy << ',' << fixed(w.x) << ',' << fixed(w.y) << ',' << l + 1
            << ',' << m + 1 << ',' << fixed(c.order.rates[l]) << '\n';
      }
    }
  }
}

}  // namespace vlc
