#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "roast/harness.hpp"
#include "roast/schemes.hpp"

namespace fs = std::filesystem;
using namespace roast;

namespace {

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

// Writes to the file when a path is given, stdout otherwise.
template <class Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  fn(out);
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

CoefficientImage external_attack(const CoefficientImage& stego, int qf, const std::string& command) {
  const fs::path dir = fs::temp_directory_path() / ("roast-attack-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const fs::path in = dir / "stego.pgm";
  const fs::path out = dir / "attacked.jpg";
  write_pgm(decode_to_pixels(stego), in);
  std::string cmd = command;
  auto substitute = [&cmd](const std::string& token, const std::string& value) {
    for (std::size_t pos; (pos = cmd.find(token)) != std::string::npos;) cmd.replace(pos, token.size(), value);
  };
  substitute("{in}", shell_quote(in.string()));
  substitute("{out}", shell_quote(out.string()));
  substitute("{qf}", std::to_string(qf));
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    fs::remove_all(dir);
    throw Error("external encoder failed with status " + std::to_string(rc));
  }
  auto attacked = read_jpeg(out);
  fs::remove_all(dir);
  return attacked;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust JPEG steganography toolkit"};
  app.require_subcommand(1);

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "Embed a message into a JPEG cover");
  std::string cover_path, stego_path, key_path, message_path, message_out, scheme = "roast-st";
  SchemeParams params;
  std::uint64_t seed = 1;
  embed_cmd->add_option("--cover", cover_path, "Cover JPEG")->required()->check(CLI::ExistingFile);
  embed_cmd->add_option("--out", stego_path, "Stego JPEG to write")->required();
  embed_cmd->add_option("--key", key_path, "Key JSON to write")->required();
  embed_cmd->add_option("--scheme", scheme, "dmas | gmas | roast-os | roast-st")->capture_default_str();
  embed_cmd->add_option("--payload", params.payload, "Relative payload in bpnzac")->capture_default_str();
  embed_cmd->add_option("--t1", params.t1, "Truncation depth")->capture_default_str();
  embed_cmd->add_option("--t2", params.t2, "Block overflow threshold")->capture_default_str();
  embed_cmd->add_option("--mu", params.mu, "Reference-cover cost factor")->capture_default_str();
  embed_cmd->add_option("--lambda", params.lambda, "Asymmetric cost factor")->capture_default_str();
  embed_cmd->add_option("--stc-height", params.stc_h, "STC constraint height")->capture_default_str();
  embed_cmd->add_option("--seed", seed, "Key seed")->capture_default_str();
  embed_cmd->add_option("--message", message_path, "Message file (random message when omitted)");
  embed_cmd->add_option("--message-out", message_out, "Where to save the embedded message");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "Recompress a JPEG as a lossy channel would");
  std::string attack_in, attack_out, external;
  int attack_qf = 85;
  bool no_trunc = false, no_round = false;
  attack_cmd->add_option("--in", attack_in, "Input JPEG")->required()->check(CLI::ExistingFile);
  attack_cmd->add_option("--out", attack_out, "Output JPEG")->required();
  attack_cmd->add_option("--qf", attack_qf, "Channel quality factor")->required()->check(CLI::Range(1, 100));
  attack_cmd->add_flag("--no-trunc", no_trunc, "Skip spatial truncation");
  attack_cmd->add_flag("--no-round", no_round, "Skip spatial rounding");
  attack_cmd->add_option("--external", external,
                         "Shell command run instead of the internal simulator; {in} (PGM), {out} (JPEG) and {qf} "
                         "are substituted");

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Extract a message from a received JPEG");
  std::string extract_in, extract_key, ref_msg, extract_out;
  extract_cmd->add_option("--in", extract_in, "Received JPEG")->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--key", extract_key, "Key JSON")->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("--ref-msg", ref_msg, "Reference message for bit comparison")->check(CLI::ExistingFile);
  extract_cmd->add_option("--out", extract_out, "Where to save the extracted message");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a scheme over a corpus");
  std::string config_path, sweep_out;
  sweep_cmd->add_option("--config", config_path, "Sweep config JSON")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "CSV output (overrides the config)");

  // stats-overflow
  auto* stats_cmd = app.add_subcommand("stats-overflow", "Per-position overflow statistics");
  std::string corpus_dir, samples_out, summary_out;
  std::vector<int> stats_qfs{65, 75, 85, 95};
  std::size_t stats_limit = 0;
  stats_cmd->add_option("--corpus", corpus_dir, "Directory of JPEGs")->required()->check(CLI::ExistingDirectory);
  stats_cmd->add_option("--qf", stats_qfs, "Quality factors")->delimiter(',')->capture_default_str();
  stats_cmd->add_option("--out", samples_out, "Long-format CSV (stdout when omitted)");
  stats_cmd->add_option("--summary", summary_out, "Per-image summary CSV");
  stats_cmd->add_option("--limit", stats_limit, "Use only the first N images");

  // mc-rounding
  auto* mc_cmd = app.add_subcommand("mc-rounding", "Monte Carlo of rounding-error survival");
  std::vector<int> mc_qs{1, 2, 3, 8};
  std::uint64_t mc_trials = 1000000, mc_seed = 1;
  mc_cmd->add_option("--q", mc_qs, "Quantization steps")->delimiter(',')->capture_default_str();
  mc_cmd->add_option("--trials", mc_trials, "Error blocks per step")->capture_default_str();
  mc_cmd->add_option("--seed", mc_seed, "RNG seed")->capture_default_str();

  // ablate
  auto* ablate_cmd = app.add_subcommand("ablate", "Coefficient perturbation from spatial stages");
  std::string ablate_in, ablate_out;
  int ablate_qf = 85;
  bool ablate_no_trunc = false, ablate_no_round = false;
  ablate_cmd->add_option("--in", ablate_in, "Input JPEG")->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--qf", ablate_qf, "Target quality factor")->check(CLI::Range(1, 100))->capture_default_str();
  ablate_cmd->add_flag("--no-trunc", ablate_no_trunc, "Skip spatial truncation");
  ablate_cmd->add_flag("--no-round", ablate_no_round, "Skip spatial rounding");
  ablate_cmd->add_option("--out", ablate_out, "CSV output (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*embed_cmd) {
      params.scheme = parse_scheme(scheme);
      const auto cover = read_jpeg(cover_path);
      std::vector<std::uint8_t> msg;
      if (!message_path.empty()) {
        msg = read_bytes(message_path);
      } else {
        std::mt19937_64 rng(seed);
        msg.resize(message_bytes_for(cover, params.payload));
        for (auto& b : msg) b = static_cast<std::uint8_t>(rng() & 0xff);
        if (message_out.empty()) message_out = stego_path + ".msg";
      }
      const auto r = embed(cover, msg, seed, params);
      write_jpeg(r.stego, stego_path);
      save_key(r.key, key_path);
      if (!message_out.empty()) write_bytes(message_out, msg);
      std::cout << "scheme " << scheme_name(params.scheme) << "\n"
                << "message_bytes " << msg.size() << "\n"
                << "relative_payload " << format_number(r.payload.relative()) << "\n"
                << "codewords " << r.key.codewords << "\n"
                << "preprocessing_changes " << r.preprocessing_changes << "\n"
                << "embedding_changes " << r.embedding_changes << "\n"
                << "omega_before " << format_number(r.omega_before) << "\n"
                << "omega_after " << format_number(r.omega_after) << "\n";
    } else if (*attack_cmd) {
      const auto img = read_jpeg(attack_in);
      const auto attacked = external.empty() ? recompress(img, attack_qf, AblationFlags{!no_trunc, !no_round})
                                             : external_attack(img, attack_qf, external);
      write_jpeg(attacked, attack_out);
      std::cout << "changed_coefficients "
                << (attacked.qtable() == img.qtable() ? std::to_string(count_changed(img, attacked)) : "n/a") << "\n";
    } else if (*extract_cmd) {
      const auto key = load_key(extract_key);
      const auto out = extract(decode_to_pixels(read_jpeg(extract_in)), key);
      if (!extract_out.empty()) write_bytes(extract_out, out.message);
      std::cout << "message_bytes " << out.message.size() << "\n"
                << "codewords " << out.codewords << "\n"
                << "failed_codewords " << out.failed_codewords << "\n"
                << "length_valid " << (out.length_valid ? "yes" : "no") << "\n";
      if (!ref_msg.empty()) {
        const auto ref = read_bytes(ref_msg);
        std::cout << "r_error " << format_number(bit_error_rate(ref, out)) << "\n"
                  << "identical " << (out.message == ref ? "yes" : "no") << "\n";
      }
      if (out.failed_codewords > 0) return 6;
    } else if (*sweep_cmd) {
      auto config = load_sweep_config(config_path);
      if (!sweep_out.empty()) config.output = sweep_out;
      const auto records = run_sweep(config);
      emit(config.output.string(), [&](std::ostream& os) { write_eval_csv(os, records, config.timing); });
    } else if (*stats_cmd) {
      const auto stats = overflow_stats(list_corpus(corpus_dir, stats_limit), stats_qfs);
      emit(samples_out, [&](std::ostream& os) { write_overflow_samples(os, stats.samples); });
      if (!summary_out.empty()) emit(summary_out, [&](std::ostream& os) { write_overflow_summaries(os, stats.summaries); });
    } else if (*mc_cmd) {
      write_rounding_table(std::cout, rounding_mc(mc_qs, mc_trials, mc_seed));
    } else if (*ablate_cmd) {
      const auto report = ablate(read_jpeg(ablate_in), ablate_qf, AblationFlags{!ablate_no_trunc, !ablate_no_round});
      emit(ablate_out, [&](std::ostream& os) { write_ablation_report(os, report); });
      std::cerr << "blocks " << report.blocks << " overflowing " << report.overflowing_blocks << " total_abs "
                << format_number(report.total_abs) << " overflow_total_abs "
                << format_number(report.overflow_total_abs) << "\n";
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const EmbeddingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
