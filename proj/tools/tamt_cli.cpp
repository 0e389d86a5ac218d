// tamt: synthetic multi-timbre dataset generation, constant-Q analysis,
// salience transcription, timbre separation, and evaluation.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tamt/config.hpp"
#include "tamt/cqt.hpp"
#include "tamt/datagen.hpp"
#include "tamt/evalmetrics.hpp"
#include "tamt/jsonl.hpp"
#include "tamt/losses.hpp"
#include "tamt/memory.hpp"
#include "tamt/plot.hpp"
#include "tamt/rng.hpp"
#include "tamt/separation.hpp"
#include "tamt/synth.hpp"
#include "tamt/tensor_io.hpp"
#include "tamt/wav.hpp"

namespace fs = std::filesystem;
using namespace tamt;

namespace {

std::string song_stem(int instrument, int song) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "inst%02d_song%02d", instrument, song);
  return buf;
}

synth::Timbre instrument_timbre(const RunConfig& cfg, int category, int variant) {
  const auto& bank = synth::timbre_bank();
  const synth::Timbre& base = bank[category % bank.size()].timbre;
  if (variant == 0) return base;
  return synth::make_variant(base, cfg.seed ^ (0x5151u + category * 131u + variant));
}

Score make_song(const RunConfig& cfg, int instrument, int song) {
  const double span_s = cfg.song_frames * cfg.grid.hop / cfg.grid.sample_rate;
  int n_notes = cfg.notes_per_song;
  if (n_notes <= 0) {
    n_notes = static_cast<int>(std::ceil(span_s * cfg.timing.bpm / 60.0 * 1.5)) + 4;
  }
  const uint64_t song_seed = Rng(cfg.seed, {0x9E, static_cast<uint64_t>(instrument),
                                            static_cast<uint64_t>(song)})
                                 .next();
  Score raw = datagen::generate_score(cfg.pitch, cfg.timing, n_notes, song_seed);
  Score fitted;
  for (NoteEvent e : raw) {
    if (e.onset >= span_s - 0.05) continue;
    e.duration = std::min(e.duration, span_s - e.onset - 1e-6);
    if (e.duration < 0.03) continue;
    fitted.push_back(e);
  }
  return fitted;
}

int cmd_gen(const RunConfig& cfg) {
  cfg.grid.validate();
  cfg.pitch.validate();
  cfg.timing.validate();
  fs::create_directories(cfg.out_dir);
  save_config((fs::path(cfg.out_dir) / "config.toml").string(), cfg);

  const int n_instruments = cfg.categories * cfg.variants;
  const size_t song_samples = static_cast<size_t>(cfg.song_frames) * cfg.grid.hop;

  struct Job {
    int instrument, category, variant, song;
  };
  std::vector<Job> jobs;
  for (int c = 0; c < cfg.categories; ++c) {
    for (int v = 0; v < cfg.variants; ++v) {
      for (int s = 0; s < cfg.songs_per; ++s) {
        jobs.push_back({c * cfg.variants + v, c, v, s});
      }
    }
  }

#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < static_cast<int>(jobs.size()); ++j) {
    const Job& job = jobs[j];
    const Score score = make_song(cfg, job.instrument, job.song);
    const synth::Timbre timbre = instrument_timbre(cfg, job.category, job.variant);
    const uint64_t render_seed =
        Rng(cfg.seed, {0xA7, static_cast<uint64_t>(job.instrument),
                       static_cast<uint64_t>(job.song)})
            .next();
    const auto audio =
        synth::render_track(score, timbre, cfg.grid, render_seed, song_samples);
    const auto roll = synth::score_to_pianoroll(score, cfg.grid, cfg.song_frames);

    const std::string stem =
        (fs::path(cfg.out_dir) / song_stem(job.instrument, job.song)).string();
    write_wav(stem + ".wav", audio, cfg.grid.sample_rate);
    write_score_jsonl(stem + ".jsonl", score);
    write_tensor(stem + ".roll.tamt", tensor_from_pianoroll(roll));
  }

  // Mix manifest over (category, song) tuples; a tuple's file comes from
  // variant = song % variants, so every manifest row resolves to one stem.
  nlohmann::json manifest;
  manifest["categories"] = cfg.categories;
  manifest["variants"] = cfg.variants;
  manifest["songs_per"] = cfg.songs_per;
  manifest["mix_m"] = cfg.mix_m;
  manifest["seed"] = cfg.seed;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& mix : datagen::enumerate_mixes(cfg.categories, cfg.songs_per, cfg.mix_m)) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& [cat, song] : mix) {
      const int variant = song % cfg.variants;
      const int instrument = cat * cfg.variants + variant;
      row.push_back({{"category", cat},
                     {"song", song},
                     {"stem", song_stem(instrument, song)}});
    }
    rows.push_back(row);
  }
  manifest["mixes"] = rows;
  std::ofstream mf(fs::path(cfg.out_dir) / "manifest.json", std::ios::trunc);
  mf << manifest.dump(2) << "\n";
  if (!mf) {
    std::cerr << "gen: cannot write manifest\n";
    return 1;
  }
  std::cout << "gen: " << n_instruments << " instruments x " << cfg.songs_per
            << " songs, " << rows.size() << " mixes -> " << cfg.out_dir << "\n";
  return 0;
}

int cmd_mix(const RunConfig& cfg, const std::vector<std::string>& wavs,
            const std::string& gen_dir, int index) {
  std::vector<std::string> inputs = wavs;
  std::vector<std::string> roll_paths;
  if (!gen_dir.empty()) {
    std::ifstream mf(fs::path(gen_dir) / "manifest.json");
    if (!mf) {
      std::cerr << "mix: cannot read manifest in " << gen_dir << "\n";
      return 1;
    }
    nlohmann::json manifest;
    mf >> manifest;
    const auto& rows = manifest.at("mixes");
    if (index < 0 || index >= static_cast<int>(rows.size())) {
      std::cerr << "mix: index out of range (0.." << rows.size() - 1 << ")\n";
      return 1;
    }
    for (const auto& part : rows[index]) {
      const std::string stem = part.at("stem").get<std::string>();
      inputs.push_back((fs::path(gen_dir) / (stem + ".wav")).string());
      roll_paths.push_back((fs::path(gen_dir) / (stem + ".roll.tamt")).string());
    }
  }
  if (inputs.empty()) {
    std::cerr << "mix: need input WAVs or --gen/--index\n";
    return 1;
  }
  std::vector<std::vector<double>> tracks;
  double rate = cfg.grid.sample_rate;
  for (const auto& path : inputs) {
    auto wav = read_wav(path);
    rate = wav.sample_rate;
    tracks.push_back(std::move(wav.samples));
  }
  const auto mixture = synth::mix_tracks(tracks, cfg.snr_db, cfg.seed);

  fs::create_directories(cfg.out_dir);
  const auto out_wav = fs::path(cfg.out_dir) / "mix.wav";
  write_wav(out_wav.string(), mixture, rate);
  nlohmann::json meta;
  meta["inputs"] = inputs;
  meta["references"] = roll_paths;
  if (cfg.snr_db) meta["snr_db"] = *cfg.snr_db;
  std::ofstream jf(fs::path(cfg.out_dir) / "mix.json", std::ios::trunc);
  jf << meta.dump(2) << "\n";
  std::cout << "mix: " << inputs.size() << " tracks -> " << out_wav.string() << "\n";
  return 0;
}

CqtSpectrogram analyze_wav(const std::string& path, const GridConfig& grid, bool raw) {
  const auto wav = read_wav(path);
  GridConfig g = grid;
  g.sample_rate = wav.sample_rate;
  const auto q = cqt::cqt_forward(wav.samples, g);
  return raw ? q : cqt::energy_normalize(q);
}

int cmd_cqt(const RunConfig& cfg, const std::string& wav_path, const std::string& out,
            bool raw) {
  const auto q = analyze_wav(wav_path, cfg.grid, raw);
  Tensor t = tensor_from_cmat(q.data);
  t.meta["kind"] = "cqt";
  t.meta["hop"] = cfg.grid.hop;
  t.meta["f_min"] = cfg.grid.f_min;
  t.meta["normalized"] = !raw;
  write_tensor(out, t);
  std::cout << "cqt: " << q.n_bins() << " x " << q.n_frames() << " -> " << out << "\n";
  return 0;
}

int cmd_transcribe(const RunConfig& cfg, const std::string& wav_path) {
  const auto q = analyze_wav(wav_path, cfg.grid, false);
  const auto roll = sep::salience_transcribe(q, cfg.grid, cfg.salience);
  const Score events = sep::extract_note_events(roll, cfg.extract);

  fs::create_directories(cfg.out_dir);
  save_config((fs::path(cfg.out_dir) / "config.toml").string(), cfg);
  write_tensor((fs::path(cfg.out_dir) / "transcription.roll.tamt").string(),
               tensor_from_pianoroll(roll));
  write_score_jsonl((fs::path(cfg.out_dir) / "events.jsonl").string(), events);
  std::cout << "transcribe: " << events.size() << " events -> " << cfg.out_dir << "\n";
  return 0;
}

void write_metrics_tsv(const std::string& path, const eval::PitResult& pit) {
  std::ofstream f(path, std::ios::trunc);
  f << "source\tacc\tprecision\trecall\tf1\n";
  f.setf(std::ios::fixed);
  f.precision(4);
  for (size_t i = 0; i < pit.per_source.size(); ++i) {
    const auto& s = pit.per_source[i];
    f << i << "\t" << s.acc << "\t" << s.precision << "\t" << s.recall << "\t" << s.f1
      << "\n";
  }
  f << "mean\t" << pit.mean.acc << "\t" << pit.mean.precision << "\t" << pit.mean.recall
    << "\t" << pit.mean.f1 << "\n";
}

int cmd_separate(const RunConfig& cfg, const std::string& wav_path, int m,
                 const std::vector<std::string>& ref_paths) {
  const auto q = analyze_wav(wav_path, cfg.grid, false);
  const auto roll = sep::salience_transcribe(q, cfg.grid, cfg.salience);
  const auto field = sep::bin_embeddings(q, roll, cfg.grid, cfg.embed_dim);

  sep::SeparationResult result;
  if (cfg.frame_level) {
    sep::FrameSeparateOptions opts = cfg.frame_opts;
    opts.associate = cfg.use_association;
    opts.seed = cfg.seed;
    result = sep::frame_separate(field, roll, m, opts);
  } else {
    sep::NoteSeparateOptions opts;
    opts.extract = cfg.extract;
    opts.associate = cfg.use_association;
    opts.seed = cfg.seed;
    result = sep::note_separate(roll, field, m, opts);
  }

  fs::create_directories(cfg.out_dir);
  save_config((fs::path(cfg.out_dir) / "config.toml").string(), cfg);
  for (int k = 0; k < m; ++k) {
    const std::string stem = (fs::path(cfg.out_dir) / ("source" + std::to_string(k))).string();
    write_tensor(stem + ".roll.tamt", tensor_from_pianoroll(result.sources[k]));
    write_score_jsonl(stem + ".jsonl", result.source_events[k]);
  }
  nlohmann::json labels;
  labels["pipeline"] = cfg.frame_level ? "frame" : "note";
  labels["associate"] = cfg.use_association;
  labels["labels"] = result.labels;
  std::ofstream lf(fs::path(cfg.out_dir) / "labels.json", std::ios::trunc);
  lf << labels.dump(2) << "\n";

  if (!ref_paths.empty()) {
    if (static_cast<int>(ref_paths.size()) != m) {
      std::cerr << "separate: need exactly M reference rolls\n";
      return 1;
    }
    std::vector<Pianoroll> refs;
    for (const auto& p : ref_paths) {
      refs.push_back(pianoroll_from_tensor(read_tensor(p), cfg.grid));
    }
    const int frames = result.sources[0].n_frames();
    for (auto& r : refs) {
      // Reference rolls can be a frame longer than the analyzed audio;
      // crop to the common span.
      if (r.n_frames() != frames) {
        Pianoroll cropped(r.n_pitches(), frames, r.grid);
        for (int n = 0; n < r.n_pitches(); ++n) {
          for (int t = 0; t < std::min(frames, r.n_frames()); ++t) {
            cropped.notes(n, t) = r.notes(n, t);
            cropped.onsets(n, t) = r.onsets(n, t);
          }
        }
        r = cropped;
      }
    }
    const auto pit = eval::pit_match(refs, result.sources, cfg.frame_opts.threshold);
    write_metrics_tsv((fs::path(cfg.out_dir) / "metrics.tsv").string(), pit);
    std::cout << "separate: mean F1 " << pit.mean.f1 << " (permutation";
    for (int p : pit.permutation) std::cout << " " << p;
    std::cout << ")\n";
  }
  std::cout << "separate: " << m << " sources -> " << cfg.out_dir << "\n";
  return 0;
}

int cmd_eval(const RunConfig& cfg, const std::vector<std::string>& ref_paths,
             const std::vector<std::string>& est_paths, const std::string& out) {
  if (ref_paths.size() != est_paths.size() || ref_paths.empty()) {
    std::cerr << "eval: need matching --ref/--est lists\n";
    return 1;
  }
  std::vector<Pianoroll> refs, ests;
  for (const auto& p : ref_paths) refs.push_back(pianoroll_from_tensor(read_tensor(p), cfg.grid));
  for (const auto& p : est_paths) ests.push_back(pianoroll_from_tensor(read_tensor(p), cfg.grid));
  const auto pit = eval::pit_match(refs, ests, cfg.frame_opts.threshold);

  std::cout << "source\tacc\tprecision\trecall\tf1\n";
  std::cout.setf(std::ios::fixed);
  std::cout.precision(4);
  for (size_t i = 0; i < pit.per_source.size(); ++i) {
    const auto& s = pit.per_source[i];
    std::cout << i << "\t" << s.acc << "\t" << s.precision << "\t" << s.recall << "\t"
              << s.f1 << "\n";
  }
  std::cout << "mean\t" << pit.mean.acc << "\t" << pit.mean.precision << "\t"
            << pit.mean.recall << "\t" << pit.mean.f1 << "\n";
  if (!out.empty()) write_metrics_tsv(out, pit);
  return 0;
}

int cmd_plot(const std::string& in, const std::string& kind, const std::string& out) {
  const Tensor t = read_tensor(in);
  Mat view;
  if (kind == "spec") {
    view = plot::log_magnitude_view(cmat_from_tensor(t));
  } else if (kind == "roll") {
    if (t.shape.size() == 3 && t.shape[0] == 2) {
      GridConfig g;
      view = pianoroll_from_tensor(t, g).notes;
    } else {
      view = mat_from_tensor(t);
    }
    for (double& v : view.data) v = std::clamp(v, 0.0, 1.0);
  } else {
    std::cerr << "plot: unknown kind '" << kind << "' (expected spec|roll)\n";
    return 1;
  }
  plot::write_ppm_heatmap(out, view);
  std::cout << "plot: " << view.cols << " x " << view.rows << " -> " << out << "\n";
  return 0;
}

bool report(const char* name, bool ok) {
  std::cout << (ok ? "PASS" : "FAIL") << " " << name << "\n";
  return ok;
}

int cmd_selftest() {
  bool all = true;
  Rng rng(2024);

  {  // deep clustering loss, expanded vs naive
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
      const int k = 5 + static_cast<int>(rng.uniform_int(0, 40));
      Mat v(k, 6), z(k, 3);
      for (double& x : v.data) x = rng.uniform(-1, 1);
      for (int i = 0; i < k; ++i) z(i, static_cast<int>(rng.uniform_int(0, 2))) = 1.0;
      const double a = losses::deep_cluster_loss(v, z);
      const double b = losses::deep_cluster_loss_naive(v, z);
      ok = ok && std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b));
    }
    all &= report("deep_cluster_loss expanded == naive", ok);
  }
  {  // association fused vs two-step vs attention order
    Mat v(120, 16);
    for (double& x : v.data) x = rng.uniform(-1, 1);
    std::vector<double> y(120);
    for (double& w : y) w = rng.uniform(0.01, 1.0);
    const Mat fused = memory::associate_once(v, y);
    const Mat two = memory::associate(v, memory::weighted_memory(v, y));
    const Mat quad = memory::associate_attention_order(v, y);
    double e1 = 0, e2 = 0;
    for (size_t i = 0; i < fused.size(); ++i) {
      e1 = std::max(e1, std::fabs(fused.data[i] - two.data[i]));
      e2 = std::max(e2, std::fabs(fused.data[i] - quad.data[i]));
    }
    all &= report("associate_once == associate(weighted_memory)", e1 <= 1e-12);
    all &= report("associate_once == attention-order product", e2 <= 1e-10);
  }
  {  // magnitude balance identity
    losses::LossHistory state(4);
    std::vector<double> ls = {0.3, 2.0, 11.0, 0.07};
    const auto w = losses::magnitude_balance(ls, state, 0.0);
    double inv = 0;
    for (double l : ls) inv += 1.0 / l;
    bool ok = true;
    for (int i = 0; i < 4; ++i) ok = ok && std::fabs(w[i] * ls[i] - 1.0 / inv) < 1e-12;
    all &= report("magnitude_balance equalizes weighted losses", ok);
  }
  {  // focal loss spot value
    Mat p(1, 1), y(1, 1);
    p(0, 0) = 0.5;
    y(0, 0) = 1.0;
    const double got = losses::focal_loss(p, y, 0.2, 1.0);
    all &= report("focal_loss(p=.5, alpha=.2, gamma=1) == .1*ln2",
                  std::fabs(got - 0.2 * 0.5 * std::log(2.0)) < 1e-12);
  }
  {  // PIT planted permutation
    Pianoroll a(8, 10), b(8, 10);
    for (int t = 0; t < 10; ++t) a.notes(2, t) = 1.0;
    for (int t = 0; t < 10; ++t) b.notes(5, t) = 1.0;
    const auto pit = eval::pit_match({a, b}, {b, a});
    all &= report("pit_match recovers a planted swap",
                  pit.permutation == std::vector<int>{1, 0} && pit.mean.f1 == 1.0);
  }
  {  // tensor round trip
    Tensor t;
    t.shape = {2, 3};
    for (int i = 0; i < 6; ++i) t.payload.push_back(static_cast<float>(rng.uniform(-1, 1)));
    const auto path = (fs::temp_directory_path() / "tamt_selftest.tamt").string();
    write_tensor(path, t);
    const Tensor back = read_tensor(path);
    fs::remove(path);
    all &= report("tensor write/read round trip", back.payload == t.payload);
  }
  std::cout << (all ? "selftest OK" : "selftest FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"timbre-aware music transcription toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  RunConfig cfg;

  // The config file is loaded before flag parsing so that flags given on
  // the command line override file values.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
  }
  if (!config_path.empty()) {
    try {
      cfg = load_config(config_path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--out", cfg.out_dir, "output directory");
  };

  auto* gen = app.add_subcommand("gen", "generate a random synthetic dataset");
  add_common(gen);
  gen->add_option("--categories", cfg.categories, "timbre categories");
  gen->add_option("--variants", cfg.variants, "instruments per category");
  gen->add_option("--songs", cfg.songs_per, "songs per instrument");
  gen->add_option("--frames", cfg.song_frames, "frames per song");
  gen->add_option("--notes", cfg.notes_per_song, "notes per song (0 = fill)");
  gen->add_option("--mix", cfg.mix_m, "mixture size for the manifest");

  auto* mix = app.add_subcommand("mix", "mix tracks, optionally with noise");
  add_common(mix);
  std::vector<std::string> mix_wavs;
  std::string mix_gen;
  int mix_index = 0;
  double snr_value = 0.0;
  mix->add_option("wavs", mix_wavs, "input WAV files");
  mix->add_option("--gen", mix_gen, "dataset directory with manifest.json");
  mix->add_option("--index", mix_index, "manifest row to mix");
  auto* snr_opt = mix->add_option("--snr-db", snr_value, "white noise SNR in dB");

  auto* cqt_cmd = app.add_subcommand("cqt", "constant-Q spectrogram of a WAV");
  add_common(cqt_cmd);
  std::string cqt_wav, cqt_out = "cqt.tamt";
  bool cqt_raw = false;
  cqt_cmd->add_option("wav", cqt_wav, "input WAV")->required();
  cqt_cmd->add_option("--tensor", cqt_out, "output tensor path");
  cqt_cmd->add_flag("--raw", cqt_raw, "skip energy normalization");

  auto* tr = app.add_subcommand("transcribe", "timbre-agnostic salience transcription");
  add_common(tr);
  std::string tr_wav;
  tr->add_option("wav", tr_wav, "input WAV")->required();

  auto* sep_cmd = app.add_subcommand("separate", "timbre-separated transcription");
  add_common(sep_cmd);
  std::string sep_wav;
  int sep_m = 2;
  std::vector<std::string> sep_refs;
  std::string associate_mode = "on";
  bool frame_level_flag = false;
  double sep_threshold = -1.0;
  sep_cmd->add_option("wav", sep_wav, "input WAV")->required();
  sep_cmd->add_option("--mix", sep_m, "number of sources M");
  sep_cmd->add_option("--ref", sep_refs, "reference roll tensors (M of them)");
  sep_cmd->add_option("--associate", associate_mode, "memory sharpening: on|off")
      ->check(CLI::IsMember({"on", "off"}));
  sep_cmd->add_flag("--frame-level", frame_level_flag, "frame-level pipeline");
  sep_cmd->add_option("--threshold", sep_threshold, "bin selection threshold");

  auto* ev = app.add_subcommand("eval", "frame-level metrics with PIT matching");
  add_common(ev);
  std::vector<std::string> ev_refs, ev_ests;
  std::string ev_out;
  double ev_threshold = -1.0;
  ev->add_option("--ref", ev_refs, "reference roll tensors")->required();
  ev->add_option("--est", ev_ests, "estimate roll tensors")->required();
  ev->add_option("--tsv", ev_out, "also write a TSV file");
  ev->add_option("--threshold", ev_threshold, "binarization threshold");

  auto* plot_cmd = app.add_subcommand("plot", "PPM heatmap of a tensor");
  std::string plot_in, plot_kind = "spec", plot_out = "plot.ppm";
  plot_cmd->add_option("tensor", plot_in, "input tensor")->required();
  plot_cmd->add_option("--kind", plot_kind, "spec|roll");
  plot_cmd->add_option("--out", plot_out, "output PPM path");

  app.add_subcommand("selftest", "run the built-in dual-path oracles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(cfg);
    if (mix->parsed()) {
      if (snr_opt->count() > 0) cfg.snr_db = snr_value;
      return cmd_mix(cfg, mix_wavs, mix_gen, mix_index);
    }
    if (cqt_cmd->parsed()) return cmd_cqt(cfg, cqt_wav, cqt_out, cqt_raw);
    if (tr->parsed()) return cmd_transcribe(cfg, tr_wav);
    if (sep_cmd->parsed()) {
      cfg.use_association = associate_mode == "on";
      cfg.frame_level = frame_level_flag;
      if (sep_threshold >= 0.0) {
        cfg.frame_opts.threshold = sep_threshold;
        cfg.extract.on_thresh = std::max(sep_threshold, cfg.extract.off_thresh);
      }
      return cmd_separate(cfg, sep_wav, sep_m, sep_refs);
    }
    if (ev->parsed()) {
      if (ev_threshold >= 0.0) cfg.frame_opts.threshold = ev_threshold;
      return cmd_eval(cfg, ev_refs, ev_ests, ev_out);
    }
    if (plot_cmd->parsed()) return cmd_plot(plot_in, plot_kind, plot_out);
    return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
