#include "polyforge/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "polyforge/construct.hpp"
#include "polyforge/normalize.hpp"
#include "polyforge/random_fixtures.hpp"

using namespace polyforge;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "polyforge-test";
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  std::string cmd = std::string(POLYFORGE_CLI_PATH) + " " + args;
  std::string tmp = (temp_dir() / "cli-out.txt").string();
  cmd += " > " + tmp + " 2> " + tmp + ".err";
  int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    *out = ss.str();
  }
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Rationals, StringRoundTrip) {
  EXPECT_EQ(rat_to_string(Rat(-7, 3)), "-7/3");
  EXPECT_EQ(rat_to_string(Rat(5)), "5");
  EXPECT_EQ(rat_from_string("-7/3"), Rat(-7, 3));
  EXPECT_EQ(rat_from_string("10/4"), Rat(5, 2));  // reduced on parse
  EXPECT_THROW(rat_from_string("1.5"), InputError);
  EXPECT_THROW(rat_from_string(""), InputError);
}

TEST(Documents, PolytopeRoundTripIsIdentity) {
  for (uint64_t seed : {1u, 9u}) {
    Polytope p = random_cube(3, seed);
    Polytope back = polytope_from_json(polytope_to_json(p));
    EXPECT_TRUE(same_h_polytope(back.h, p.h));
    EXPECT_TRUE(same_vertex_set(back.v, p.v));
    EXPECT_EQ(digest(back), digest(p));
  }
}

TEST(Documents, SchemaVersionIsChecked) {
  json doc = polytope_to_json(standard_cube(2));
  doc["schema"] = "polyforge/999";
  EXPECT_THROW(polytope_from_json(doc), InputError);
}

TEST(Documents, DigestIsCanonical) {
  // row order does not matter, geometry does
  Polytope cube = standard_cube(3);
  HPolytope shuffled = cube.h;
  std::swap(shuffled.rows[0], shuffled.rows[3]);
  EXPECT_EQ(digest_rows(3, cube.h.rows), digest_rows(3, shuffled.rows));
  HPolytope other = cube.h;
  other.rows[0].offset = 2;
  EXPECT_NE(digest_rows(3, cube.h.rows), digest_rows(3, other.rows));
}

TEST(Logs, DocumentReplayReproducesDigests) {
  Polytope q = random_cube(3, 13);
  TransformLog log = normalize_cube(q);
  json doc = log_to_json(log);
  TransformLog replayed = replay_log_document(doc, q);
  EXPECT_EQ(digest(replayed.final_state()), doc["final_digest"].get<std::string>());
  // tampered payload is caught
  json bad = doc;
  bad["steps"][0]["payload"]["block"][0][0] = "2";
  EXPECT_THROW(replay_log_document(bad, q), Error);
}

TEST(Off, CountsForTheStandardFixtures) {
  std::string cube = export_off(standard_cube(3));
  EXPECT_EQ(cube.substr(0, 10), "OFF\n8 6 0\n");
  VPolytope oct;
  oct.dim = 3;
  oct.vertices = {{Rat(1), Rat(0), Rat(1)},  {Rat(-1), Rat(0), Rat(1, 2)},
                  {Rat(0), Rat(1), Rat(0)},  {Rat(0), Rat(-1), Rat(3, 4)},
                  {Rat(0), Rat(0), Rat(2)},  {Rat(0), Rat(0), Rat(-1)}};
  OppositePairing pairing;
  pairing.pairs = {{0, 1}, {2, 3}, {4, 5}};
  std::string octa = export_off(crosspolytope_from_vertices(oct, pairing));
  EXPECT_EQ(octa.substr(0, 10), "OFF\n6 8 0\n");
  Tower t = build_tower(standard_cube(2), standard_cube(2), 3);
  std::string tower = export_off(t.polytope);
  EXPECT_EQ(tower.substr(0, 12), "OFF\n16 14 0\n");
}

TEST(Off, SchlegelProjectionForDimensionFour) {
  std::string off = export_off(standard_cube(4));
  EXPECT_EQ(off.substr(0, 12), "OFF\n16 24 0\n");
  EXPECT_THROW(export_off(Polytope{}, 12), InputError);
}

TEST(Cli, NormalizeStandardCube) {
  auto dir = temp_dir();
  save_json_file((dir / "cube3.json").string(), polytope_to_json(standard_cube(3)));
  std::string out;
  int status = run_cli("normalize " + (dir / "cube3.json").string(), &out);
  EXPECT_EQ(status, 0);
  json log = json::parse(out);
  EXPECT_EQ(log["bound"]["achieved"].get<size_t>(), 14u);
  EXPECT_EQ(log["bound"]["declared"].get<size_t>(), 14u);
}

TEST(Cli, NormalizeWithLogAndSnapshots) {
  auto dir = temp_dir();
  save_json_file((dir / "in.json").string(), polytope_to_json(random_cube(3, 3)));
  auto logp = dir / "log.json";
  auto snaps = dir / "snaps";
  int status = run_cli("normalize " + (dir / "in.json").string() + " --log " + logp.string() +
                       " --snapshots " + snaps.string());
  EXPECT_EQ(status, 0);
  EXPECT_TRUE(std::filesystem::exists(logp));
  EXPECT_TRUE(std::filesystem::exists(snaps / "snapshot-000.json"));
  EXPECT_TRUE(std::filesystem::exists(snaps / "snapshot-014.json"));
  // replay the emitted log against the input
  TransformLog rep = replay_log_document(load_json_file(logp.string()),
                                         polytope_from_json(load_json_file((dir / "in.json").string())));
  EXPECT_TRUE(same_h_polytope(rep.final_state().h, standard_cube(3).h));
}

TEST(Cli, RelateRandomCubes) {
  auto dir = temp_dir();
  save_json_file((dir / "a.json").string(), polytope_to_json(random_cube(3, 101)));
  save_json_file((dir / "b.json").string(), polytope_to_json(random_cube(3, 102)));
  std::string out;
  int status = run_cli("relate " + (dir / "a.json").string() + " " + (dir / "b.json").string(), &out);
  EXPECT_EQ(status, 0);
  json log = json::parse(out.substr(out.find('{')));
  EXPECT_EQ(log["bound"]["declared"].get<size_t>(), 23u);
  EXPECT_EQ(log["steps"].size(), 27u);
}

TEST(Cli, FVectorAndGc) {
  auto dir = temp_dir();
  save_json_file((dir / "cube3.json").string(), polytope_to_json(standard_cube(3)));
  std::string out;
  EXPECT_EQ(run_cli("fvector " + (dir / "cube3.json").string(), &out), 0);
  json f = json::parse(out);
  EXPECT_EQ(f["f"], (json::array({"8", "12", "6"})));
  EXPECT_EQ(run_cli("gc " + (dir / "cube3.json").string(), &out), 0);
  json g = json::parse(out);
  EXPECT_EQ(g["g_cubical"], (json::array({"4", "0"})));
  EXPECT_TRUE(g["dehn_sommerville"].get<bool>());
}

TEST(Cli, VerifyWithOracle) {
  auto dir = temp_dir();
  save_json_file((dir / "x.json").string(), polytope_to_json(random_cube(3, 55)));
  std::string out;
  EXPECT_EQ(run_cli("verify " + (dir / "x.json").string() + " --oracle", &out), 0);
  json v = json::parse(out);
  EXPECT_TRUE(v["combinatorial_cube"].get<bool>());
  EXPECT_EQ(v["oracle"], "agrees");
}

TEST(Cli, TowerAndConnect) {
  auto dir = temp_dir();
  save_json_file((dir / "sq.json").string(), polytope_to_json(standard_cube(2)));
  save_json_file((dir / "sq2.json").string(), polytope_to_json(random_cube(2, 7)));
  std::string out;
  int status = run_cli("tower " + (dir / "sq.json").string() + " " + (dir / "sq2.json").string() +
                       " --dim 3 --out " + (dir / "tower.json").string());
  EXPECT_EQ(status, 0);
  json tower = load_json_file((dir / "tower.json").string());
  EXPECT_LE(tower["provenance"]["cube_count"].get<size_t>(), 12u);
  // cross-check the built tower against the hull oracle through the CLI
  EXPECT_EQ(run_cli("verify " + (dir / "tower.json").string() + " --oracle", &out), 0);
  json v = json::parse(out);
  EXPECT_EQ(v["oracle"], "agrees");
  EXPECT_TRUE(v["cubical"].get<bool>());

  save_json_file((dir / "c1.json").string(), polytope_to_json(standard_cube(3)));
  status = run_cli("connect " + (dir / "c1.json").string() + " " + (dir / "c1.json").string() +
                   " --facet1 0 --facet2 0", &out);
  EXPECT_EQ(status, 0);
  json sum = json::parse(out);
  EXPECT_EQ(sum["vrep"].size(), 60u);
  EXPECT_EQ(sum["provenance"]["connector_cubes"].get<size_t>(), 12u);
}

TEST(Cli, ExportOffAndSchedule) {
  auto dir = temp_dir();
  save_json_file((dir / "cube3.json").string(), polytope_to_json(standard_cube(3)));
  auto off = dir / "cube3.off";
  EXPECT_EQ(run_cli("export-off " + (dir / "cube3.json").string() + " " + off.string()), 0);
  std::ifstream in(off);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "OFF");

  json gens;
  gens["generators"] = json::array({json{{"coordinate", 1}}, json{{"coordinate", 2}}});
  save_json_file((dir / "gens.json").string(), gens);
  std::string out;
  int status = run_cli("schedule --target 1,1 --generators " + (dir / "gens.json").string() +
                       " --steps 10 --dim 4", &out);
  EXPECT_EQ(status, 0);
  json rep = json::parse(out);
  EXPECT_TRUE(rep["monotone"].get<bool>());
  EXPECT_EQ(rep["steps"].size(), 10u);
}

TEST(Cli, GenIsSeededAndDeterministic) {
  std::string a, b;
  EXPECT_EQ(run_cli("gen --dim 3 --seed 42", &a), 0);
  EXPECT_EQ(run_cli("gen --dim 3 --seed 42", &b), 0);
  EXPECT_EQ(a, b);
  std::string c;
  EXPECT_EQ(run_cli("gen --dim 3 --seed 43", &c), 0);
  EXPECT_NE(a, c);
}

TEST(Cli, ErrorExitCodes) {
  auto dir = temp_dir();
  // malformed json -> input error (1)
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{ not json";
  }
  EXPECT_EQ(run_cli("fvector " + (dir / "bad.json").string()), 1);
  // normalizing a non-cube -> input error (1)
  save_json_file((dir / "cross.json").string(), polytope_to_json(standard_crosspolytope(3)));
  EXPECT_EQ(run_cli("normalize " + (dir / "cross.json").string()), 1);
}
