#include "bedmorph/model_io.hpp"

#include <zlib.h>

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bedmorph/errors.hpp"
#include "binary_io.hpp"

namespace bedmorph {

namespace {

constexpr char kMagic[] = "DMDMODEL v1\n";
constexpr std::size_t kMagicLen = 12;

// Fixed array manifest; order matters on disk.
const char* const kArrayNames[] = {
    "modes_re", "modes_im", "discrete_re", "discrete_im", "continuous_re",
    "continuous_im", "amplitudes_re", "amplitudes_im", "mean_field",
};

std::uint32_t payload_crc(const std::vector<double>& values) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(values.data()),
              static_cast<uInt>(values.size() * sizeof(double)));
  return static_cast<std::uint32_t>(crc);
}

void write_array(std::ostream& out, const std::vector<double>& values) {
  detail::put_u64_le(out, static_cast<std::uint64_t>(values.size() * sizeof(double)));
  detail::put_f64_block_le(out, values.data(), values.size());
  detail::put_u32_le(out, payload_crc(values));
}

std::vector<double> read_array(std::istream& in, const std::string& name) {
  std::uint64_t bytes = 0;
  if (!detail::get_u64_le(in, bytes) || bytes % sizeof(double) != 0) {
    raise(ErrorCode::CorruptPayload, "bad length for array " + name);
  }
  std::vector<double> values(bytes / sizeof(double));
  if (!detail::get_f64_block_le(in, values.data(), values.size())) {
    raise(ErrorCode::CorruptPayload, "truncated payload for array " + name);
  }
  std::uint32_t stored = 0;
  if (!detail::get_u32_le(in, stored)) {
    raise(ErrorCode::CorruptPayload, "missing checksum for array " + name);
  }
  if (stored != payload_crc(values)) {
    raise(ErrorCode::CorruptPayload, "checksum mismatch for array " + name);
  }
  return values;
}

std::vector<double> real_part(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  std::size_t idx = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) out[idx++] = m(r, c).real();
  return out;
}

std::vector<double> imag_part(const Eigen::Ref<const Eigen::MatrixXcd>& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  std::size_t idx = 0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) out[idx++] = m(r, c).imag();
  return out;
}

}  // namespace

void save_model(const DmdModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::InputNotFound, "cannot open for writing: " + path);

  out.write(kMagic, kMagicLen);

  nlohmann::json meta;
  meta["m"] = model.grid_m;
  meta["n"] = model.grid_n;
  meta["rank"] = model.rank;
  meta["dt"] = model.dt;
  meta["dx"] = model.dx;
  meta["dy"] = model.dy;
  meta["train_count"] = model.train_count;
  meta["vectorization"] = "row-major";
  meta["arrays"] = nlohmann::json::array();
  for (const char* name : kArrayNames) meta["arrays"].push_back(name);
  const std::string meta_text = meta.dump();
  detail::put_u64_le(out, meta_text.size());
  out.write(meta_text.data(), static_cast<std::streamsize>(meta_text.size()));

  write_array(out, real_part(model.modes));
  write_array(out, imag_part(model.modes));
  write_array(out, real_part(model.discrete_eigs));
  write_array(out, imag_part(model.discrete_eigs));
  write_array(out, real_part(model.continuous_eigs));
  write_array(out, imag_part(model.continuous_eigs));
  write_array(out, real_part(model.amplitudes));
  write_array(out, imag_part(model.amplitudes));

  std::vector<double> mean(model.mean_field.data(),
                           model.mean_field.data() + model.mean_field.size());
  write_array(out, mean);

  if (!out) raise(ErrorCode::CorruptPayload, "short write to " + path);
}

DmdModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::InputNotFound, "cannot open: " + path);

  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen)) {
    raise(ErrorCode::CorruptPayload, "file too short for magic: " + path);
  }
  if (std::string(magic, kMagicLen) != kMagic) {
    raise(ErrorCode::FormatVersionMismatch, "not a DMDMODEL v1 file: " + path);
  }

  std::uint64_t meta_len = 0;
  if (!detail::get_u64_le(in, meta_len) || meta_len > (1u << 20)) {
    raise(ErrorCode::CorruptPayload, "bad metadata length in " + path);
  }
  std::string meta_text(meta_len, '\0');
  if (!in.read(meta_text.data(), static_cast<std::streamsize>(meta_len))) {
    raise(ErrorCode::CorruptPayload, "truncated metadata in " + path);
  }

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_text);
  } catch (const std::exception& e) {
    raise(ErrorCode::CorruptPayload, std::string("bad model metadata JSON: ") + e.what());
  }

  DmdModel model;
  try {
    model.grid_m = meta.at("m").get<std::size_t>();
    model.grid_n = meta.at("n").get<std::size_t>();
    model.rank = meta.at("rank").get<int>();
    model.dt = meta.at("dt").get<double>();
    model.dx = meta.at("dx").get<double>();
    model.dy = meta.at("dy").get<double>();
    model.train_count = meta.at("train_count").get<std::size_t>();
    if (meta.at("vectorization").get<std::string>() != "row-major") {
      raise(ErrorCode::FormatVersionMismatch, "unsupported vectorization order");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorCode::CorruptPayload, std::string("incomplete model metadata: ") + e.what());
  }

  const std::size_t mn = model.state_size();
  const auto r = static_cast<std::size_t>(model.rank);

  auto modes_re = read_array(in, "modes_re");
  auto modes_im = read_array(in, "modes_im");
  auto disc_re = read_array(in, "discrete_re");
  auto disc_im = read_array(in, "discrete_im");
  auto cont_re = read_array(in, "continuous_re");
  auto cont_im = read_array(in, "continuous_im");
  auto amp_re = read_array(in, "amplitudes_re");
  auto amp_im = read_array(in, "amplitudes_im");
  auto mean = read_array(in, "mean_field");

  if (modes_re.size() != mn * r || modes_im.size() != mn * r || disc_re.size() != r ||
      disc_im.size() != r || cont_re.size() != r || cont_im.size() != r ||
      amp_re.size() != r || amp_im.size() != r || mean.size() != mn) {
    raise(ErrorCode::CorruptPayload, "array sizes disagree with metadata in " + path);
  }
  char extra;
  if (in.read(&extra, 1)) raise(ErrorCode::CorruptPayload, "trailing bytes in " + path);

  model.modes.resize(mn, r);
  std::size_t idx = 0;
  for (std::size_t c = 0; c < r; ++c)
    for (std::size_t row = 0; row < mn; ++row, ++idx)
      model.modes(row, c) = {modes_re[idx], modes_im[idx]};

  model.discrete_eigs.resize(r);
  model.continuous_eigs.resize(r);
  model.amplitudes.resize(r);
  for (std::size_t k = 0; k < r; ++k) {
    model.discrete_eigs(k) = {disc_re[k], disc_im[k]};
    model.continuous_eigs(k) = {cont_re[k], cont_im[k]};
    model.amplitudes(k) = {amp_re[k], amp_im[k]};
  }
  model.mean_field = Eigen::Map<const Eigen::VectorXd>(mean.data(), mean.size());
  return model;
}

}  // namespace bedmorph
