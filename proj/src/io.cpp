#include "tvk/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

#include "tvk/prng.hpp"

namespace tvk {

using nlohmann::json;

namespace {

json rat_vector_json(const RatVector& v) {
  json a = json::array();
  for (const Rat& x : v) a.push_back(x.str());
  return a;
}

RatVector rat_vector_from(const json& a, const std::string& where) {
  require(a.is_array(), ErrorKind::parse, where + ": expected an array of rational strings");
  RatVector v;
  for (size_t i = 0; i < a.size(); ++i) {
    require(a[i].is_string(), ErrorKind::parse, where + "[" + std::to_string(i) + "]: expected a rational string");
    v.push_back(Rat::parse_or_throw(a[i].get<std::string>(), where + "[" + std::to_string(i) + "]"));
  }
  return v;
}

json parts_json(const std::array<IndexSet, 3>& parts) {
  json a = json::array();
  for (const auto& p : parts) a.push_back(p);
  return a;
}

std::array<IndexSet, 3> parts_from(const json& a, const std::string& where) {
  require(a.is_array() && a.size() == 3, ErrorKind::parse, where + ": expected three index arrays");
  std::array<IndexSet, 3> parts;
  for (int p = 0; p < 3; ++p) {
    require(a[static_cast<size_t>(p)].is_array(), ErrorKind::parse, where + ": part must be an array");
    for (const auto& e : a[static_cast<size_t>(p)]) {
      require(e.is_number_integer(), ErrorKind::parse, where + ": indices must be integers");
      parts[static_cast<size_t>(p)].push_back(e.get<int>());
    }
  }
  return parts;
}

json certificate_json(const IntersectionCertificate& cert) {
  json c;
  c["common_point"] = rat_vector_json(cert.common_point);
  json coeffs = json::array();
  for (const auto& part : cert.coefficients) {
    json pc = json::array();
    for (const auto& [idx, w] : part) pc.push_back(json::array({idx, w.str()}));
    coeffs.push_back(pc);
  }
  c["coefficients"] = coeffs;
  return c;
}

IntersectionCertificate certificate_from(const json& c, const std::string& where) {
  IntersectionCertificate cert;
  require(c.contains("common_point") && c.contains("coefficients"), ErrorKind::parse,
          where + ": certificate needs common_point and coefficients");
  cert.common_point = rat_vector_from(c["common_point"], where + ".common_point");
  const json& coeffs = c["coefficients"];
  require(coeffs.is_array() && coeffs.size() == 3, ErrorKind::parse, where + ": expected three coefficient lists");
  for (int p = 0; p < 3; ++p) {
    for (const auto& e : coeffs[static_cast<size_t>(p)]) {
      require(e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_string(), ErrorKind::parse,
              where + ": coefficient entries are [index, rational-string]");
      cert.coefficients[static_cast<size_t>(p)].emplace_back(
          e[0].get<int>(), Rat::parse_or_throw(e[1].get<std::string>(), where + ".coefficients"));
    }
  }
  return cert;
}

json trace_json(const ReductionTrace& t) {
  json doc;
  doc["kind"] = "reduction-trace";
  doc["k"] = t.instance.k;
  doc["base_order"] = t.base_order;
  doc["a1_perturbed"] = t.a1_perturbed;
  doc["a1_point"] = rat_vector_json(t.instance.base[0]);
  doc["epsilon"] = t.instance.epsilon.str();
  doc["delta"] = t.instance.delta.str();
  json masts = json::array();
  for (const Rat& h : t.instance.mast_heights) masts.push_back(h.str());
  doc["mast_heights"] = masts;
  doc["vkf"] = {{"parts", parts_json(t.vkf.parts)}, {"certificate", certificate_json(t.vkf.cert)}};
  doc["seed"] = parts_json(t.seed.parts);
  doc["descent"] = {{"parts", parts_json(t.descent.parts)},
                    {"z_prime", rat_vector_json(t.descent.z_prime)},
                    {"certificate", certificate_json(t.descent.cert)},
                    {"unused_special", t.descent.unused_special}};
  doc["case"] = t.case_tag;
  if (t.highest_vertices) doc["highest_vertices"] = *t.highest_vertices;
  doc["projected_parts"] = parts_json(t.projected_parts);
  doc["retries"] = t.retries;
  doc["final"] = {{"parts", parts_json(t.final_witness.parts)},
                  {"certificate", certificate_json(t.final_witness.cert)}};
  return doc;
}

json parse_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  require(!doc.is_discarded(), ErrorKind::parse, "document is not valid JSON");
  return doc;
}

bool verify_trace_document(const PointConfig& points, const json& doc) {
  int k = doc.at("k").get<int>();
  std::vector<int> order = doc.at("base_order").get<std::vector<int>>();
  if (static_cast<int>(order.size()) != points.size()) return false;

  // final partition against the original input is the headline claim
  TverbergWitness final_w{parts_from(doc.at("final").at("parts"), "final"),
                          certificate_from(doc.at("final").at("certificate"), "final")};
  if (!verify_witness(points, final_w)) return false;

  // reconstruct the working instance and re-check the internal stages
  PointConfig working = points.subset(order);
  working.points[0] = rat_vector_from(doc.at("a1_point"), "a1_point");
  Rat eps = Rat::parse_or_throw(doc.at("epsilon").get<std::string>(), "epsilon");
  Rat delta = Rat::parse_or_throw(doc.at("delta").get<std::string>(), "delta");
  std::array<Rat, 4> heights;
  const json& masts = doc.at("mast_heights");
  if (!masts.is_array() || masts.size() != 4) return false;
  for (int j = 0; j < 4; ++j)
    heights[static_cast<size_t>(j)] = Rat::parse_or_throw(masts[static_cast<size_t>(j)].get<std::string>(), "mast");
  LiftedInstance inst;
  try {
    inst = make_lifted_instance(working, k, eps, delta, heights);
  } catch (const Error&) {
    return false;
  }

  VkfWitness vkf{parts_from(doc.at("vkf").at("parts"), "vkf"),
                 certificate_from(doc.at("vkf").at("certificate"), "vkf"), k};
  if (!verify_vkf(inst.lifted, vkf)) return false;

  CandidateTriple seed{parts_from(doc.at("seed"), "seed")};
  DescentResult descent{parts_from(doc.at("descent").at("parts"), "descent"),
                        rat_vector_from(doc.at("descent").at("z_prime"), "descent.z_prime"),
                        certificate_from(doc.at("descent").at("certificate"), "descent"),
                        doc.at("descent").at("unused_special").get<std::vector<std::string>>()};
  if (!verify_descent_result(inst, seed, descent)) return false;

  int case_tag = doc.at("case").get<int>();
  return case_tag == 1 || case_tag == 2;
}

} // namespace

PointConfig parse_pointset(const std::string& text) {
  json doc = parse_json(text);
  require(doc.is_object() && doc.contains("dim") && doc.contains("points"), ErrorKind::parse,
          "point set needs 'dim' and 'points'");
  require(doc["dim"].is_number_integer(), ErrorKind::parse, "'dim' must be an integer");
  int dim = doc["dim"].get<int>();
  require(dim >= 1, ErrorKind::parse, "'dim' must be positive");
  require(doc["points"].is_array(), ErrorKind::parse, "'points' must be an array");
  std::vector<RatVector> pts;
  for (size_t i = 0; i < doc["points"].size(); ++i) {
    RatVector row = rat_vector_from(doc["points"][i], "points[" + std::to_string(i) + "]");
    require(static_cast<int>(row.size()) == dim, ErrorKind::parse,
            "points[" + std::to_string(i) + "]: expected " + std::to_string(dim) + " coordinates");
    pts.push_back(std::move(row));
  }
  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    require(doc["labels"].is_array(), ErrorKind::parse, "'labels' must be an array");
    for (const auto& l : doc["labels"]) {
      require(l.is_string(), ErrorKind::parse, "labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  try {
    return PointConfig(dim, std::move(pts), std::move(labels));
  } catch (const Error& e) {
    fail(ErrorKind::parse, std::string("point set: ") + e.what());
  }
}

std::string serialize_pointset(const PointConfig& config) {
  json doc;
  doc["dim"] = config.dim;
  json pts = json::array();
  for (const auto& p : config.points) pts.push_back(rat_vector_json(p));
  doc["points"] = pts;
  doc["labels"] = config.labels;
  return doc.dump(2) + "\n";
}

std::string serialize_tverberg(const TverbergWitness& w) {
  json doc;
  doc["kind"] = "tverberg";
  doc["parts"] = parts_json(w.parts);
  doc["certificate"] = certificate_json(w.cert);
  return doc.dump(2) + "\n";
}

std::string serialize_vkf(const VkfWitness& w) {
  json doc;
  doc["kind"] = "vkf";
  doc["k"] = w.k;
  doc["parts"] = parts_json(w.parts);
  doc["certificate"] = certificate_json(w.cert);
  return doc.dump(2) + "\n";
}

std::string serialize_trace(const ReductionTrace& t) { return trace_json(t).dump(2) + "\n"; }

std::string serialize_oracle(const std::vector<std::pair<CandidateTriple, IntersectionCertificate>>& all) {
  json doc;
  doc["kind"] = "tverberg-oracle";
  json ws = json::array();
  for (const auto& [t, cert] : all)
    ws.push_back({{"parts", parts_json(t.parts)}, {"certificate", certificate_json(cert)}});
  doc["witnesses"] = ws;
  return doc.dump(2) + "\n";
}

bool verify_document(const PointConfig& points, const std::string& witness_text) {
  json doc = parse_json(witness_text);
  require(doc.is_object() && doc.contains("kind") && doc["kind"].is_string(), ErrorKind::parse,
          "witness document needs a 'kind'");
  std::string kind = doc["kind"].get<std::string>();
  if (kind == "tverberg") {
    TverbergWitness w{parts_from(doc.at("parts"), "parts"),
                      certificate_from(doc.at("certificate"), "certificate")};
    return verify_witness(points, w);
  }
  if (kind == "vkf") {
    VkfWitness w{parts_from(doc.at("parts"), "parts"), certificate_from(doc.at("certificate"), "certificate"),
                 doc.at("k").get<int>()};
    return verify_vkf(points, w);
  }
  if (kind == "reduction-trace") {
    return verify_trace_document(points, doc);
  }
  if (kind == "tverberg-oracle") {
    for (const auto& e : doc.at("witnesses")) {
      CandidateTriple t{parts_from(e.at("parts"), "parts")};
      IntersectionCertificate cert = certificate_from(e.at("certificate"), "certificate");
      try {
        t.validate(points.size());
      } catch (const Error&) {
        return false;
      }
      if (!verify_certificate(points, t, cert)) return false;
    }
    return true;
  }
  fail(ErrorKind::parse, "unknown witness kind '" + kind + "'");
}

PointConfig generate_instance(uint64_t seed, int count, int dim, int denom_bound) {
  require(count >= 1, ErrorKind::input, "generate_instance: count must be positive");
  require(dim >= 1, ErrorKind::input, "generate_instance: dim must be positive");
  require(denom_bound >= 1, ErrorKind::input, "generate_instance: denom_bound must be positive");
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<RatVector> pts;
    pts.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
      RatVector p;
      for (int c = 0; c < dim; ++c) {
        long long num = rng.int_in(-65536, 65536);
        long long den = 1 + static_cast<long long>(rng.below(static_cast<uint64_t>(denom_bound)));
        p.emplace_back(num, den);
      }
      pts.push_back(std::move(p));
    }
    PointConfig config(dim, std::move(pts));
    if (is_general_position(config).ok) return config;
  }
  fail(ErrorKind::generation, "generate_instance: rejection limit exceeded");
}

std::string render_svg(const PointConfig& config, const std::optional<TverbergWitness>& witness) {
  require(config.dim == 2, ErrorKind::input, "render_svg: only dim-2 configurations are drawable");
  require(config.size() >= 1, ErrorKind::input, "render_svg: empty configuration");

  double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  for (const auto& p : config.points) {
    min_x = std::min(min_x, p[0].to_double());
    max_x = std::max(max_x, p[0].to_double());
    min_y = std::min(min_y, p[1].to_double());
    max_y = std::max(max_y, p[1].to_double());
  }
  double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double size = 640.0, margin = 60.0;
  auto sx = [&](double x) { return margin + (x - min_x) / span * (size - 2 * margin); };
  auto sy = [&](double y) { return size - margin - (y - min_y) / span * (size - 2 * margin); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  if (witness) {
    static const char* fills[3] = {"#e41a1c", "#377eb8", "#4daf4a"};
    for (int p = 0; p < 3; ++p) {
      const IndexSet& part = witness->parts[static_cast<size_t>(p)];
      // Andrew monotone chain with exact orientation tests
      std::vector<int> pts(part.begin(), part.end());
      std::sort(pts.begin(), pts.end(), [&](int a, int b) {
        if (config[a][0] != config[b][0]) return config[a][0] < config[b][0];
        return config[a][1] < config[b][1];
      });
      auto cross_nonpos = [&](int o, int a, int b) {
        Rat v = (config[a][0] - config[o][0]) * (config[b][1] - config[o][1]) -
                (config[a][1] - config[o][1]) * (config[b][0] - config[o][0]);
        return v.sgn() <= 0;
      };
      std::vector<int> hull;
      for (int pass = 0; pass < 2; ++pass) {
        size_t start = hull.size();
        for (int i : pts) {
          while (hull.size() >= start + 2 && cross_nonpos(hull[hull.size() - 2], hull.back(), i)) hull.pop_back();
          hull.push_back(i);
        }
        hull.pop_back();
        std::reverse(pts.begin(), pts.end());
      }
      out << "  <polygon points=\"";
      for (int i : hull) out << sx(config[i][0].to_double()) << "," << sy(config[i][1].to_double()) << " ";
      out << "\" fill=\"" << fills[p] << "\" fill-opacity=\"0.25\" stroke=\"" << fills[p] << "\"/>\n";
    }
  }
  for (int i = 0; i < config.size(); ++i) {
    double x = sx(config[i][0].to_double()), y = sy(config[i][1].to_double());
    out << "  <circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\" fill=\"black\"/>\n";
    out << "  <text x=\"" << x + 6 << "\" y=\"" << y - 6 << "\" font-size=\"12\">" << config.labels[static_cast<size_t>(i)]
        << "</text>\n";
  }
  if (witness) {
    double x = sx(witness->cert.common_point[0].to_double());
    double y = sy(witness->cert.common_point[1].to_double());
    out << "  <path d=\"M" << x - 7 << " " << y << " L" << x + 7 << " " << y << " M" << x << " " << y - 7 << " L"
        << x << " " << y + 7 << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    out << "  <circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

} // namespace tvk
