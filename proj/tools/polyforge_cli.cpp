// polyforge command line: exact polytope documents in, certified logs,
// constructions, enumerative data and OFF exports out.
//
// Exit codes: 0 success, 1 input error, 2 certificate failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "polyforge/construct.hpp"
#include "polyforge/io.hpp"
#include "polyforge/normalize.hpp"
#include "polyforge/random_fixtures.hpp"

using namespace polyforge;

namespace {

void emit(const json& doc, const std::optional<std::string>& path) {
  if (path)
    save_json_file(*path, doc);
  else
    std::cout << doc.dump(2) << "\n";
}

void write_snapshots(const TransformLog& log, const std::string& dir) {
  std::filesystem::create_directories(dir);
  save_json_file(dir + "/snapshot-000.json", polytope_to_json(log.input));
  for (size_t i = 0; i < log.entries.size(); ++i) {
    std::ostringstream name;
    name << dir << "/snapshot-" << std::setw(3) << std::setfill('0') << (i + 1) << ".json";
    save_json_file(name.str(), polytope_to_json(log.entries[i].after));
  }
}

void report_bound(const TransformLog& log) {
  if (log.length() > log.declared_bound) {
    std::cerr << "note: declared bound " << log.declared_bound << " exceeded at step "
              << log.declared_bound << " (achieved " << log.length() << ")\n";
  }
}

RatVec parse_target(const std::string& csv) {
  RatVec t;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) t.push_back(rat_from_string(item));
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyforge: exact rational toolkit for cube normalization, cubical towers and f/g-vector calculus"};
  app.require_subcommand(1);

  std::string in_path, in2_path, out_off;
  std::optional<std::string> log_path, out_path, snapshots_dir;
  int dim = 0;
  long facet1 = 0, facet2 = 0;
  bool use_oracle = false;
  int digits = 12;
  std::string target_csv, generators_path, kind = "cube";
  long steps = 10;
  uint64_t seed = 1;
  std::optional<long> pad;

  auto* cmd_normalize = app.add_subcommand("normalize", "normalize a combinatorial cube to the standard cube");
  cmd_normalize->add_option("input", in_path, "cube document")->required();
  cmd_normalize->add_option("--log", log_path, "write the transform log here instead of stdout");
  cmd_normalize->add_option("--snapshots", snapshots_dir, "write per-step polytope documents into this directory");

  auto* cmd_relate = app.add_subcommand("relate", "transform one cube onto another");
  cmd_relate->add_option("input", in_path, "first cube document")->required();
  cmd_relate->add_option("input2", in2_path, "second cube document")->required();
  cmd_relate->add_option("--log", log_path, "write the transform log here instead of stdout");

  auto* cmd_tower = app.add_subcommand("tower", "build a d-tower connecting two (d-1)-cubes");
  cmd_tower->add_option("input", in_path, "bottom (d-1)-cube document")->required();
  cmd_tower->add_option("input2", in2_path, "top (d-1)-cube document")->required();
  cmd_tower->add_option("--dim", dim, "tower dimension d")->required();
  cmd_tower->add_option("--pad", pad, "pad with right prisms to exactly this many cubes");
  cmd_tower->add_option("--out", out_path, "write the tower document here instead of stdout");

  auto* cmd_connect = app.add_subcommand("connect", "C-connected sum of two cubical polytopes");
  cmd_connect->add_option("input", in_path, "first polytope document")->required();
  cmd_connect->add_option("input2", in2_path, "second polytope document")->required();
  cmd_connect->add_option("--facet1", facet1, "facet row index in the first polytope")->required();
  cmd_connect->add_option("--facet2", facet2, "facet row index in the second polytope")->required();
  cmd_connect->add_option("--out", out_path, "write the result document here instead of stdout");

  auto* cmd_fvector = app.add_subcommand("fvector", "f-vector of a polytope document");
  cmd_fvector->add_option("input", in_path)->required();

  auto* cmd_gc = app.add_subcommand("gc", "cubical h- and g^c-vector of a polytope document");
  cmd_gc->add_option("input", in_path)->required();

  auto* cmd_verify = app.add_subcommand("verify", "re-run the exact representation checks");
  cmd_verify->add_option("input", in_path)->required();
  cmd_verify->add_flag("--oracle", use_oracle, "cross-check against the brute-force hull oracle");

  auto* cmd_off = app.add_subcommand("export-off", "decimal OFF export (viewing only)");
  cmd_off->add_option("input", in_path)->required();
  cmd_off->add_option("output", out_off, "OFF file to write")->required();
  cmd_off->add_option("--digits", digits, "decimal digits (default 12)");

  auto* cmd_schedule = app.add_subcommand("schedule", "density schedule toward a target g^c ray");
  cmd_schedule->add_option("--target", target_csv, "comma separated ray s1,...,sk")->required();
  cmd_schedule->add_option("--generators", generators_path, "generator document")->required();
  cmd_schedule->add_option("--steps", steps, "number of reported steps (default 10)");
  cmd_schedule->add_option("--dim", dim, "ambient dimension d")->required();

  auto* cmd_gen = app.add_subcommand("gen", "emit a seeded random cube or crosspolytope document");
  cmd_gen->add_option("--dim", dim, "dimension")->required();
  cmd_gen->add_option("--seed", seed, "random seed (default 1)");
  cmd_gen->add_option("--kind", kind, "cube | crosspolytope (default cube)");
  cmd_gen->add_option("--out", out_path, "write the document here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_normalize) {
      Polytope q = polytope_from_json(load_json_file(in_path));
      TransformLog log = normalize_cube(q);
      report_bound(log);
      if (snapshots_dir) write_snapshots(log, *snapshots_dir);
      emit(log_to_json(log), log_path);
    } else if (*cmd_relate) {
      Polytope q = polytope_from_json(load_json_file(in_path));
      Polytope q2 = polytope_from_json(load_json_file(in2_path));
      TransformLog log = relate_cubes(q, q2);
      report_bound(log);
      emit(log_to_json(log), log_path);
    } else if (*cmd_tower) {
      Polytope q = polytope_from_json(load_json_file(in_path));
      Polytope q2 = polytope_from_json(load_json_file(in2_path));
      if (q.dim() != dim - 1 || q2.dim() != dim - 1)
        throw InputError("tower inputs must be (d-1)-dimensional");
      Tower t = build_tower(q, q2, pad ? std::optional<size_t>(*pad) : std::nullopt);
      json prov;
      prov["construction"] = "tower";
      prov["cube_count"] = t.cube_count;
      prov["bottom_facet"] = t.bottom_facet;
      prov["top_facet"] = t.top_facet;
      prov["natural_cubes"] = t.provenance.natural_cubes;
      prov["padded_cubes"] = t.provenance.padded_cubes;
      prov["glue_parameters"] = to_json(RatVec(t.provenance.glue_parameters.begin(),
                                               t.provenance.glue_parameters.end()));
      prov["bottom_witness"] = payload_to_json(StepTag::Projective, t.bottom_witness);
      prov["top_witness"] = payload_to_json(StepTag::Projective, t.top_witness);
      emit(polytope_to_json(t.polytope, prov), out_path);
    } else if (*cmd_connect) {
      Polytope p1 = polytope_from_json(load_json_file(in_path));
      Polytope p2 = polytope_from_json(load_json_file(in2_path));
      if (facet1 < 0 || facet1 >= static_cast<long>(p1.h.rows.size()) || facet2 < 0 ||
          facet2 >= static_cast<long>(p2.h.rows.size()))
        throw InputError("facet index out of range");
      CConnectedSum cs = c_connected_sum(p1, static_cast<size_t>(facet1), p2, static_cast<size_t>(facet2));
      json prov;
      prov["construction"] = "c-connected-sum";
      prov["connector_cubes"] = cs.connector_cubes;
      prov["glue_parameters"] = json::array({rat_to_string(cs.glue_parameter_1), rat_to_string(cs.glue_parameter_2)});
      emit(polytope_to_json(cs.polytope, prov), out_path);
    } else if (*cmd_fvector) {
      Polytope p = polytope_from_json(load_json_file(in_path));
      FVector f = f_vector_of(p);
      json out;
      out["dim"] = f.d;
      json entries = json::array();
      for (const Int& x : f.entries) entries.push_back(x.str());
      out["f"] = entries;
      std::cout << out.dump(2) << "\n";
    } else if (*cmd_gc) {
      Polytope p = polytope_from_json(load_json_file(in_path));
      FVector f = f_vector_of(p);
      RatPolynomial hsc = short_cubical_h(f);
      RatPolynomial hc = cubical_h(f);
      GcVector g = gc_vector(hc, f.d);
      json out;
      out["dim"] = f.d;
      out["h_short_cubical"] = to_json(hsc.coeffs);
      out["h_cubical"] = to_json(hc.coeffs);
      out["dehn_sommerville"] = check_dehn_sommerville(hc, f.d);
      json ge = json::array();
      for (const Int& x : g.entries) ge.push_back(x.str());
      out["g_cubical"] = ge;
      std::cout << out.dump(2) << "\n";
    } else if (*cmd_verify) {
      Polytope p = polytope_from_json(load_json_file(in_path));
      auto outcome = check_valid_realization(p.v, p.h, p.inc);
      if (!outcome.ok()) throw CertificateError("verification failed: " + outcome.violated_check);
      json out;
      out["valid_realization"] = to_json(*outcome.certificate);
      out["combinatorial_cube"] = is_combinatorial_cube(p.inc);
      out["combinatorial_crosspolytope"] = is_combinatorial_crosspolytope(p.inc);
      out["cubical"] = is_cubical(p);
      out["digest"] = digest(p);
      if (use_oracle) {
        if (!oracle_agrees(p)) throw CertificateError("oracle disagrees with the stored representation");
        out["oracle"] = "agrees";
      }
      std::cout << out.dump(2) << "\n";
    } else if (*cmd_off) {
      Polytope p = polytope_from_json(load_json_file(in_path));
      std::ofstream out(out_off);
      if (!out) throw InputError("cannot write " + out_off);
      out << export_off(p, digits);
    } else if (*cmd_schedule) {
      json gens_doc = load_json_file(generators_path);
      std::vector<GeneratorSpec> gens;
      for (const auto& g : gens_doc.at("generators"))
        gens.push_back(GeneratorSpec{g.at("coordinate").get<int>()});
      RatVec target = parse_target(target_csv);
      ScheduleReport rep = density_schedule(dim, target, gens, static_cast<size_t>(steps));
      json out;
      out["dim"] = rep.d;
      out["target"] = to_json(rep.target);
      out["monotone"] = rep.monotone;
      json steps_json = json::array();
      for (const auto& s : rep.steps) {
        json sj;
        sj["m"] = s.m;
        sj["pairing_indices"] = s.pairing_indices;
        json ge = json::array();
        for (const Int& x : s.combined.entries) ge.push_back(x.str());
        sj["g_cubical"] = ge;
        sj["cos2_g"] = rat_to_string(s.cos2_g);
        sj["cos2_f"] = rat_to_string(s.cos2_f);
        steps_json.push_back(sj);
      }
      out["steps"] = steps_json;
      std::cout << out.dump(2) << "\n";
    } else if (*cmd_gen) {
      Polytope p;
      if (kind == "cube")
        p = random_cube(dim, seed);
      else if (kind == "crosspolytope")
        p = random_crosspolytope(dim, seed).first;
      else
        throw InputError("unknown kind: " + kind);
      json prov;
      prov["construction"] = "seeded-random";
      prov["seed"] = seed;
      prov["kind"] = kind;
      emit(polytope_to_json(p, prov), out_path);
    }
  } catch (const CertificateError& e) {
    std::cerr << "certificate failure: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
