#include "wavinv/io/json.hpp"

#include <json.hpp>

#include "wavinv/error.hpp"

namespace wavinv::io {

using nlohmann::json;

namespace {

constexpr const char* kBandNames[wavelet::kBands] = {"horizontal", "vertical", "diagonal"};

template <typename T>
json array_to_json(const Array2D<T>& a) {
  json rows = json::array();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
Array2D<T> array_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw IoError(where + ": expected an array of rows");
  const std::size_t R = j.size();
  const std::size_t C = R ? j[0].size() : 0;
  Array2D<T> a(R, C);
  for (std::size_t r = 0; r < R; ++r) {
    if (!j[r].is_array() || j[r].size() != C) throw IoError(where + ": ragged row " + std::to_string(r));
    for (std::size_t c = 0; c < C; ++c) {
      if (!j[r][c].is_number()) throw IoError(where + ": non-numeric entry");
      a(r, c) = j[r][c].get<T>();
    }
  }
  return a;
}

}  // namespace

std::string quadtree_to_json(const wavelet::CoefficientQuadtree& tree, int indent) {
  json j;
  j["format"] = "wavinv-quadtree";
  j["max_level"] = tree.max_level;
  j["half_width"] = tree.half_width;
  j["boundary"] = tree.boundary == wavelet::Boundary::periodic ? "periodic" : "reflect";
  j["domain"] = {tree.domain.x0, tree.domain.x1, tree.domain.y0, tree.domain.y1};
  j["scaling"] = array_to_json(tree.scaling);
  json details = json::array();
  for (int l = 0; l < tree.max_level; ++l) {
    json d;
    d["level"] = l;
    json mask;
    for (int b = 0; b < wavelet::kBands; ++b) {
      d[kBandNames[b]] = array_to_json(tree.details[l][b]);
      mask[kBandNames[b]] = array_to_json(tree.mask[l][b]);
    }
    d["mask"] = std::move(mask);
    details.push_back(std::move(d));
  }
  j["details"] = std::move(details);
  return j.dump(indent);
}

wavelet::CoefficientQuadtree quadtree_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("quadtree JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "wavinv-quadtree") throw IoError("quadtree JSON: missing format tag");
    wavelet::CoefficientQuadtree t;
    t.max_level = j.at("max_level").get<int>();
    t.half_width = j.at("half_width").get<int>();
    const auto b = j.at("boundary").get<std::string>();
    if (b == "periodic") t.boundary = wavelet::Boundary::periodic;
    else if (b == "reflect") t.boundary = wavelet::Boundary::reflect;
    else throw IoError("quadtree JSON: unknown boundary '" + b + "'");
    const auto& dom = j.at("domain");
    if (!dom.is_array() || dom.size() != 4) throw IoError("quadtree JSON: domain needs 4 numbers");
    t.domain = {dom[0].get<double>(), dom[1].get<double>(), dom[2].get<double>(), dom[3].get<double>()};
    t.scaling = array_from_json<double>(j.at("scaling"), "scaling");
    const auto& details = j.at("details");
    if (!details.is_array() || int(details.size()) != t.max_level)
      throw IoError("quadtree JSON: details must list max_level levels");
    t.details.resize(std::size_t(t.max_level));
    t.mask.resize(std::size_t(t.max_level));
    for (int l = 0; l < t.max_level; ++l) {
      const auto& d = details[std::size_t(l)];
      if (d.at("level").get<int>() != l) throw IoError("quadtree JSON: details out of order");
      for (int k = 0; k < wavelet::kBands; ++k) {
        const std::string where = "level " + std::to_string(l) + " " + kBandNames[k];
        t.details[l][k] = array_from_json<double>(d.at(kBandNames[k]), where);
        t.mask[l][k] = array_from_json<std::uint8_t>(d.at("mask").at(kBandNames[k]), where + " mask");
      }
    }
    t.validate();
    return t;
  } catch (const json::exception& e) {
    throw IoError(std::string("quadtree JSON: ") + e.what());
  }
}

}  // namespace wavinv::io
