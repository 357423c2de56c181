#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "mfaccel/error.hpp"
#include "mfaccel/surrogate.hpp"

namespace mfaccel {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'F', 'S', 'U', 'R', 'R', 'O', 'G'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) os.put(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_u64(std::ostream& os, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) os.put(static_cast<char>((v >> (8 * b)) & 0xffu));
}

std::uint64_t get_le(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw Error(ErrorCode::FileFormat, "truncated model file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return v;
}

}  // namespace

void save_model(const SurrogateModel& model, const std::filesystem::path& path) {
  const std::size_t m = model.problem.state_dim;
  nlohmann::json header;
  header["format"] = "mfaccel-surrogate";
  header["version"] = kFormatVersion;
  header["problem"] = model.problem.name;
  header["scheme"] = std::string(scheme_name(model.scheme));
  header["horizon"] = model.base_grid.horizon();
  header["h"] = model.base_grid.base_step();
  header["r"] = model.base_grid.ratio();
  header["N"] = model.base_grid.base_steps();
  header["n"] = model.size();
  header["Q"] = model.training_size;
  header["tol"] = model.tol;
  header["seed"] = model.seed;
  header["state_dim"] = m;
  header["param_dim"] = model.problem.param_dim;
  header["selected_params"] = model.selected;
  header["selection_residuals"] = model.selection_residuals;
  nlohmann::json levels = nlohmann::json::array();
  for (int j = 1; j <= kLevels; ++j) levels.push_back({{"level", j}, {"nodes", model.grid(j).steps() + 1}});
  header["levels"] = levels;
  const std::string text = header.dump();

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  os.write(kMagic.data(), kMagic.size());
  put_u32(os, kFormatVersion);
  put_u32(os, 0);
  put_u64(os, text.size());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& level : model.snapshots)
    for (const auto& snap : level)
      for (double v : snap.values()) put_u64(os, std::bit_cast<std::uint64_t>(v));
  if (!os) throw Error(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

SurrogateModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open model file '" + path.string() + "'");
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw Error(ErrorCode::FileFormat, "not a surrogate model file");
  const auto version = static_cast<std::uint32_t>(get_le(is, 4));
  if (version != kFormatVersion)
    throw Error(ErrorCode::FileFormat, "unsupported model format version " + std::to_string(version));
  get_le(is, 4);
  const std::uint64_t header_len = get_le(is, 8);
  if (header_len > (1u << 26)) throw Error(ErrorCode::FileFormat, "implausible header length");
  std::string text(header_len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!is) throw Error(ErrorCode::FileFormat, "truncated model header");

  SurrogateModel model;
  try {
    const auto header = nlohmann::json::parse(text);
    model.problem = make_problem(header.at("problem").get<std::string>());
    model.scheme = parse_scheme(header.at("scheme").get<std::string>());
    const double horizon = header.at("horizon").get<double>();
    if (horizon != model.problem.horizon)
      throw Error(ErrorCode::FileFormat, "model horizon does not match problem '" + model.problem.name + "'");
    model.base_grid = LevelGrid(horizon, header.at("N").get<std::size_t>(), header.at("r").get<int>(), 1);
    model.training_size = header.at("Q").get<std::size_t>();
    model.tol = header.at("tol").get<double>();
    model.seed = header.at("seed").get<std::uint64_t>();
    model.selected = header.at("selected_params").get<std::vector<Params>>();
    model.selection_residuals = header.at("selection_residuals").get<std::vector<double>>();
    if (header.at("n").get<std::size_t>() != model.selected.size() ||
        header.at("state_dim").get<std::size_t>() != model.problem.state_dim)
      throw Error(ErrorCode::FileFormat, "inconsistent model header");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FileFormat, std::string("bad model header: ") + e.what());
  }

  const std::size_t m = model.problem.state_dim;
  for (int j = 1; j <= kLevels; ++j) {
    auto& level = model.snapshots[static_cast<std::size_t>(j - 1)];
    for (const auto& k : model.selected) {
      Trajectory snap(model.grid(j), m, k);
      for (double& v : snap.values()) v = std::bit_cast<double>(get_le(is, 8));
      level.push_back(std::move(snap));
    }
  }
  if (is.peek() != std::char_traits<char>::eof()) throw Error(ErrorCode::FileFormat, "trailing bytes in model file");
  model.assemble();
  return model;
}

}  // namespace mfaccel
