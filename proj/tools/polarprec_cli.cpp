// polarprec: BLER sweeps, capacity profiles and codebook generation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polarprec/harness.hpp"

using namespace polarprec;

namespace {

std::vector<double> parse_snr_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad --snr value '" + text + "'");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[1] <= 0.0 || parts[2] < parts[0])
    throw ConfigError("--snr expects start:step:stop with step > 0 and stop >= start");
  std::vector<double> out;
  const long count = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[1]);
  return out;
}

struct Options {
  int mt = 3, mr = 3, streams = 2, slots = 64;
  double rate = 0.25;
  std::string snr = "0:1:8";
  std::string tpc = "none";
  int b = 0, b1 = 0, b2 = 0;
  std::string decoder = "sc";
  int list = 8;
  int crc_len = 0;
  long frames = 1000;
  std::uint64_t seed = 1;
  std::string channel = "fixed-eq20";
  std::string codebook_file;
  std::string infoset_file;
  long trials = 10000;
  int construction_draws = 1000;
  std::string construction = "per-frame";
  int workers = 0;
  std::string out;
};

void add_system_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--mt", o.mt, "transmit antennas");
  cmd->add_option("--mr", o.mr, "receive antennas");
  cmd->add_option("--streams", o.streams, "spatial streams M");
  cmd->add_option("--slots", o.slots, "slots per frame N (code length 2N)");
  cmd->add_option("--rate", o.rate, "code rate R");
  cmd->add_option("--snr", o.snr, "Es/N0 in dB, start:step:stop or a single value");
  cmd->add_option("--b", o.b, "DFT feedback bits");
  cmd->add_option("--b1", o.b1, "W feedback bits");
  cmd->add_option("--b2", o.b2, "Q feedback bits");
  cmd->add_option("--decoder", o.decoder, "sc or cascl");
  cmd->add_option("--list", o.list, "CA-SCL list size");
  cmd->add_option("--crc-len", o.crc_len, "per-stream CRC length (0, 6, 11, 16)");
  cmd->add_option("--frames", o.frames, "frames per SNR point (draws for capacity-profile)");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--channel", o.channel, "fading or fixed-eq20");
  cmd->add_option("--codebook-file", o.codebook_file, "read codebooks instead of training");
  cmd->add_option("--trials", o.trials, "rotation training trials");
  cmd->add_option("--construction", o.construction, "fading only: per-frame or averaged code construction");
  cmd->add_option("--construction-draws", o.construction_draws, "fading channel draws for the GA bound / averaged code");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  cmd->add_option("--out", o.out, "output CSV path (stdout if empty)");
}

SystemConfig to_config(const Options& o) {
  SystemConfig c;
  c.m_t = o.mt;
  c.m_r = o.mr;
  c.m = o.streams;
  c.n = o.slots;
  c.rate = o.rate;
  c.snr_db = parse_snr_range(o.snr);
  c.tpc = parse_tpc_mode(o.tpc.substr(0, o.tpc.find(',')));
  c.b = o.b;
  c.b1 = o.b1;
  c.b2 = o.b2;
  c.decoder = parse_decoder(o.decoder);
  c.list_size = o.list;
  c.crc_len = o.crc_len;
  c.frames = o.frames;
  c.master_seed = o.seed;
  c.channel = parse_channel_mode(o.channel);
  c.codebook_trials = o.trials;
  c.construction_draws = o.construction_draws;
  c.construction = parse_construction_mode(o.construction);
  c.workers = o.workers;
  if (!o.codebook_file.empty()) c.codebooks = read_codebooks(o.codebook_file);
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polar-coded MIMO with finite-feedback unitary precoding"};
  app.require_subcommand(1);
  Options o;

  auto* bler = app.add_subcommand("bler", "Monte Carlo BLER/BER sweep");
  add_system_flags(bler, o);
  bler->add_option("--tpc", o.tpc, "none, dft, polar, fopt, polar-qopt");
  bler->add_option("--infoset-file", o.infoset_file, "write the code constructed at the last SNR point");

  auto* profile = app.add_subcommand("capacity-profile", "substream capacities versus SNR");
  add_system_flags(profile, o);
  profile->add_option("--tpc", o.tpc, "comma-separated modes");

  auto* book = app.add_subcommand("make-codebook", "train and write codebooks");
  add_system_flags(book, o);
  book->add_option("--tpc", o.tpc, "dft (one book) or polar (W and Q books)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bler->parsed()) {
      const SystemConfig c = to_config(o);
      if (!o.infoset_file.empty() && c.channel == ChannelMode::fading && c.construction == ConstructionMode::per_frame)
        throw ConfigError("--infoset-file needs a single code: use --construction averaged or a fixed channel");
      const SimResult r = run_bler(c);
      emit(o.out, bler_csv(r));
      if (!o.out.empty()) emit(o.out + ".json", result_metadata_json(r));
      if (!o.infoset_file.empty()) write_info_sets(o.infoset_file, r.codes.back());
    } else if (profile->parsed()) {
      std::vector<TpcMode> modes;
      std::stringstream ss(o.tpc);
      std::string item;
      while (std::getline(ss, item, ',')) modes.push_back(parse_tpc_mode(item));
      SystemConfig c = to_config(o);
      emit(o.out, capacity_profile_csv(run_capacity_profile(c, modes)));
    } else if (book->parsed()) {
      SystemConfig c = to_config(o);
      validate(c);
      const PrecoderSelector selector(c);
      if (selector.codebooks().empty()) throw ConfigError("mode " + o.tpc + " has no codebook");
      if (o.out.empty()) {
        for (const auto& cb : selector.codebooks()) std::cout << format_codebook(cb);
      } else {
        write_codebooks(o.out, selector.codebooks());
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
