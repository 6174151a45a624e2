#include "jscc/sim.hpp"

#include <algorithm>
#include <cmath>

#include "jscc/measures.hpp"
#include "jscc/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jscc {

namespace {

constexpr std::uint64_t tag_bin1 = 0xb1, tag_bin2 = 0xb2;
constexpr std::uint64_t tag_cw1 = 0xc1, tag_cw2 = 0xc2, tag_cw3 = 0xc3;

int draw_from_row(const std::vector<double>& row, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    acc += row[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(row.size()) - 1;
}

double wilson_z() { return 1.959963984540054; }

// Cell bookkeeping for one typicality reference: strides per tuple position,
// support mask, probabilities and the absolute count tolerance.
struct RefTable {
  std::vector<std::size_t> strides;  // one per tuple variable, tuple order
  std::vector<double> probs;
  std::vector<char> support;
  double tol = 0.0;  // epsilon / cell count

  RefTable() = default;
  RefTable(const JointPmf& ref, const std::vector<std::string>& tuple_vars, double epsilon) {
    for (const auto& name : tuple_vars) strides.push_back(ref.stride(ref.var_index(name)));
    probs = ref.probs();
    support.resize(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) support[i] = probs[i] > 0.0;
    tol = epsilon / static_cast<double>(probs.size());
  }

  bool counts_typical(const std::vector<int>& counts, int n) const {
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (!support[i] && counts[i] > 0) return false;
      if (std::abs(static_cast<double>(counts[i]) / n - probs[i]) > tol) return false;
    }
    return true;
  }
};

struct TrialResult {
  int relay_block_errors = 0;
  int dest_block_errors = 0;
  bool session_error = false;
  std::vector<TraceRow> trace;
};

const char* verdict_name(int found, bool correct) {
  if (found == 0) return "none";
  if (found > 1) return "ambiguous";
  return correct ? "ok" : "wrong";
}

}  // namespace

bool is_jointly_typical(const std::vector<std::vector<int>>& seqs,
                        const JointPmf& ref, double epsilon) {
  if (epsilon <= 0.0) throw std::invalid_argument("typicality slack must be positive");
  const auto& vars = ref.variables();
  if (seqs.size() != vars.size()) {
    throw std::invalid_argument("one sequence per reference variable required");
  }
  if (seqs.empty() || seqs[0].empty()) {
    throw std::invalid_argument("sequences must be nonempty");
  }
  const std::size_t n = seqs[0].size();
  for (std::size_t v = 0; v < seqs.size(); ++v) {
    if (seqs[v].size() != n) throw std::invalid_argument("sequence lengths differ");
  }

  std::vector<int> counts(ref.size(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t cell = 0;
    for (std::size_t v = 0; v < seqs.size(); ++v) {
      const int sym = seqs[v][k];
      if (sym < 0 || sym >= vars[v].size) {
        throw std::invalid_argument("symbol out of range for '" + vars[v].name + "'");
      }
      cell += ref.stride(v) * static_cast<std::size_t>(sym);
    }
    ++counts[cell];
  }

  const double tol = epsilon / static_cast<double>(ref.size());
  const auto& p = ref.probs();
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c] == 0.0 && counts[c] > 0) return false;
    if (std::abs(static_cast<double>(counts[c]) / n - p[c]) > tol) return false;
  }
  return true;
}

Codebooks::Codebooks(std::uint64_t session_key, const InputChainThm2& chain,
                     int bins1, int bins2)
    : key_(session_key), bins1_(bins1), bins2_(bins2) {
  if (bins1_ < 1 || bins2_ < 1) throw std::invalid_argument("bin counts must be >= 1");
  x1_rows_ = chain.x1_given_s1.rows();
  x2_rows_ = chain.x2_given_s2.rows();
  x3_rows_ = chain.x3_given_s1s2.rows();
  s2_size_ = chain.x2_given_s2.given_vars()[0].size;
}

std::uint64_t Codebooks::seq_hash(const std::vector<int>& seq) const {
  return hash_sequence(seq, key_);
}

int Codebooks::bin1(const std::vector<int>& s1_seq) const {
  return static_cast<int>(mix64(key_ ^ tag_bin1, seq_hash(s1_seq)) %
                          static_cast<std::uint64_t>(bins1_));
}

int Codebooks::bin2(const std::vector<int>& s2_seq) const {
  return static_cast<int>(mix64(key_ ^ tag_bin2, seq_hash(s2_seq)) %
                          static_cast<std::uint64_t>(bins2_));
}

int Codebooks::x1_letter(int u, std::uint64_t s1_hash, int s1_symbol, int k) const {
  const std::uint64_t h =
      mix64(mix64(key_ ^ tag_cw1, s1_hash) ^ static_cast<std::uint64_t>(u),
            static_cast<std::uint64_t>(k) + 1);
  return draw_from_row(x1_rows_[s1_symbol], u01(h));
}

int Codebooks::x2_letter(int u, std::uint64_t s2_hash, int s2_symbol, int k) const {
  const std::uint64_t h =
      mix64(mix64(key_ ^ tag_cw2, s2_hash) ^ static_cast<std::uint64_t>(u),
            static_cast<std::uint64_t>(k) + 1);
  return draw_from_row(x2_rows_[s2_symbol], u01(h));
}

int Codebooks::x3_letter(std::uint64_t s1_hash, std::uint64_t s2_hash, int s1_symbol,
                         int s2_symbol, int k) const {
  const std::uint64_t h = mix64(mix64(key_ ^ tag_cw3, s1_hash) ^ s2_hash,
                                static_cast<std::uint64_t>(k) + 1);
  return draw_from_row(x3_rows_[s1_symbol * s2_size_ + s2_symbol], u01(h));
}

RateHint sw_rate_hint(const SourceModel& src, double delta) {
  if (delta < 0.0) throw std::invalid_argument("rate slack must be nonnegative");
  RateHint h;
  h.delta = delta;
  h.r1 = conditional_entropy(src.pmf, {"S1"}, {"S2", "W3"}) + delta;
  h.r2 = conditional_entropy(src.pmf, {"S2"}, {"S1", "W3"}) + delta;
  h.sum_floor_bits = conditional_entropy(src.pmf, {"S1", "S2"}, {"W3"});
  h.sum_ok = h.r1 + h.r2 > h.sum_floor_bits + 2.0 * delta;
  return h;
}

namespace {

// Everything fixed across trials of one simulation run.
struct SimContext {
  const SourceModel& src;
  const InputChainThm2& chain;
  const ChannelModel& ch;
  const SimConfig& cfg;
  int bins1, bins2;

  JointPmf source_pmf;   // (S1,S2,W,W3)
  JointPmf pair_pmf;     // (S1,S2)
  JointPmf ref_relay_chan;  // (S1,S2,X1,X2,X3,Y3)
  JointPmf ref_relay_src;   // (S1,S2,W3)
  JointPmf ref_dest;        // (S1,S2,W,X1,X2,X3,Y)

  RefTable t_relay_chan;  // tuple order (S1,S2,X1,X2,X3,Y3)
  RefTable t_relay_src;   // (S1,S2,W3)
  RefTable t_dest;        // (S1,S2,W,X1,X2,X3,Y)

  // Per relay-side-info symbol / destination-side-info symbol: admissible
  // (s1,s2) pairs, in flat (s1-major) order.
  std::vector<std::vector<std::pair<int, int>>> pairs_by_w3;
  std::vector<std::vector<std::pair<int, int>>> pairs_by_w;
};

SimContext make_context(const SourceModel& src, const InputChainThm2& chain,
                        const ChannelModel& ch, const SimConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("block length must be >= 1");
  if (cfg.blocks < 1) throw std::invalid_argument("block count must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("trial count must be >= 1");
  if (cfg.epsilon <= 0.0) throw std::invalid_argument("typicality slack must be positive");
  if (cfg.rate1 < 0.0 || cfg.rate2 < 0.0) throw std::invalid_argument("rates must be >= 0");

  if (cfg.n * cfg.rate1 > 40.0 || cfg.n * cfg.rate2 > 40.0) {
    throw std::invalid_argument("bin pair budget exceeded");
  }
  const std::int64_t b1 = std::max<std::int64_t>(1, std::llround(std::exp2(cfg.n * cfg.rate1)));
  const std::int64_t b2 = std::max<std::int64_t>(1, std::llround(std::exp2(cfg.n * cfg.rate2)));
  if (static_cast<double>(b1) * static_cast<double>(b2) > static_cast<double>(max_bin_pairs)) {
    throw std::invalid_argument("bin pair budget exceeded: " + std::to_string(b1) + " x " +
                                std::to_string(b2));
  }
  const int bins1 = static_cast<int>(b1);
  const int bins2 = static_cast<int>(b2);

  JointPmf joint = assemble_joint(src, chain, ch);
  SimContext ctx{src, chain, ch, cfg, bins1, bins2,
                 src.pmf,
                 marginalize(src.pmf, {"S1", "S2"}),
                 marginalize(joint, {"S1", "S2", "X1", "X2", "X3", "Y3"}),
                 marginalize(src.pmf, {"S1", "S2", "W3"}),
                 marginalize(joint, {"S1", "S2", "W", "X1", "X2", "X3", "Y"}),
                 {}, {}, {}, {}, {}};

  ctx.t_relay_chan = RefTable(ctx.ref_relay_chan, {"S1", "S2", "X1", "X2", "X3", "Y3"},
                              cfg.epsilon);
  ctx.t_relay_src = RefTable(ctx.ref_relay_src, {"S1", "S2", "W3"}, cfg.epsilon);
  ctx.t_dest = RefTable(ctx.ref_dest, {"S1", "S2", "W", "X1", "X2", "X3", "Y"}, cfg.epsilon);

  const int ns1 = src.s1_size(), ns2 = src.s2_size();
  const int nw = src.w_size(), nw3 = src.w3_size();
  const JointPmf p_ssw3 = marginalize(src.pmf, {"S1", "S2", "W3"});
  const JointPmf p_ssw = marginalize(src.pmf, {"S1", "S2", "W"});

  ctx.pairs_by_w3.resize(nw3);
  for (int w3 = 0; w3 < nw3; ++w3) {
    for (int s1 = 0; s1 < ns1; ++s1)
      for (int s2 = 0; s2 < ns2; ++s2) {
        if (p_ssw3.at({s1, s2, w3}) > 0.0) ctx.pairs_by_w3[w3].push_back({s1, s2});
      }
  }
  ctx.pairs_by_w.resize(nw);
  for (int w = 0; w < nw; ++w) {
    for (int s1 = 0; s1 < ns1; ++s1)
      for (int s2 = 0; s2 < ns2; ++s2) {
        if (p_ssw.at({s1, s2, w}) > 0.0) ctx.pairs_by_w[w].push_back({s1, s2});
      }
  }

  std::size_t max_options = 1;
  for (const auto& lst : ctx.pairs_by_w3) max_options = std::max(max_options, lst.size());
  for (const auto& lst : ctx.pairs_by_w) max_options = std::max(max_options, lst.size());
  if (std::pow(static_cast<double>(max_options), cfg.n) > max_source_candidates) {
    throw std::invalid_argument("source candidate budget exceeded at this block length");
  }
  return ctx;
}

// Odometer over per-letter admissible pairs. Returns false when exhausted.
bool next_candidate(std::vector<int>& pick,
                    const std::vector<const std::vector<std::pair<int, int>>*>& options) {
  for (std::size_t k = pick.size(); k-- > 0;) {
    if (++pick[k] < static_cast<int>(options[k]->size())) return true;
    pick[k] = 0;
  }
  return false;
}

void fill_candidate(const std::vector<int>& pick,
                    const std::vector<const std::vector<std::pair<int, int>>*>& options,
                    std::vector<int>& t1, std::vector<int>& t2) {
  for (std::size_t k = 0; k < pick.size(); ++k) {
    const auto& pr = (*options[k])[pick[k]];
    t1[k] = pr.first;
    t2[k] = pr.second;
  }
}

TrialResult run_trial(const SimContext& ctx, std::int64_t trial,
                      bool want_trace) {
  const SimConfig& cfg = ctx.cfg;
  const int n = cfg.n, B = cfg.blocks;
  const std::uint64_t session_key = mix64(cfg.seed, 0x5e551a0ULL + static_cast<std::uint64_t>(trial));
  Codebooks cb(session_key, ctx.chain, ctx.bins1, ctx.bins2);
  TrialResult out;

  // --- sample the session -------------------------------------------------
  SplitMix src_rng(session_key, 1);
  const auto& svars = ctx.source_pmf.variables();
  std::vector<std::vector<int>> s1(B, std::vector<int>(n)), s2 = s1, w = s1, w3 = s1;
  for (int b = 0; b < B; ++b) {
    for (int k = 0; k < n; ++k) {
      std::size_t cell = draw_from_row(ctx.source_pmf.probs(), src_rng.next_u01());
      // decode row-major cell to (s1,s2,w,w3)
      int coords[4];
      for (int v = 3; v >= 0; --v) {
        coords[v] = static_cast<int>(cell % svars[v].size);
        cell /= svars[v].size;
      }
      s1[b][k] = coords[0];
      s2[b][k] = coords[1];
      w[b][k] = coords[2];
      w3[b][k] = coords[3];
    }
  }

  SplitMix apair_rng(session_key, 2);
  std::vector<int> a1(n), a2(n);
  const int ns2 = ctx.src.s2_size();
  for (int k = 0; k < n; ++k) {
    const std::size_t cell = draw_from_row(ctx.pair_pmf.probs(), apair_rng.next_u01());
    a1[k] = static_cast<int>(cell) / ns2;
    a2[k] = static_cast<int>(cell) % ns2;
  }

  std::vector<int> u1(B), u2(B);
  for (int b = 0; b < B; ++b) {
    u1[b] = cb.bin1(s1[b]);
    u2[b] = cb.bin2(s2[b]);
  }

  // --- run the channel blocks and the relay -------------------------------
  std::vector<std::vector<int>> y_blk(B + 1, std::vector<int>(n));
  std::vector<std::vector<int>> y3_blk = y_blk;
  std::vector<std::vector<int>> x3_blk = y_blk;
  std::vector<std::vector<int>> est1(B), est2(B);  // relay estimates

  const int ny3 = ctx.ch.y3_size();
  const auto& ch_rows = ctx.ch.kernel.rows();
  const int nx2 = ctx.ch.x2_size(), nx3 = ctx.ch.x3_size();

  const RefTable& rc = ctx.t_relay_chan;
  const std::size_t rc_cells = rc.probs.size();
  std::vector<int> rc_counts(rc_cells, 0);

  for (int c = 0; c <= B; ++c) {
    SplitMix ch_rng(session_key, 16 + static_cast<std::uint64_t>(c));
    const std::vector<int>& ctx1 = (c == 0) ? a1 : s1[c - 1];
    const std::vector<int>& ctx2 = (c == 0) ? a2 : s2[c - 1];
    const int ub1 = (c < B) ? u1[c] : 0;
    const int ub2 = (c < B) ? u2[c] : 0;
    const std::uint64_t h1 = cb.seq_hash(ctx1), h2 = cb.seq_hash(ctx2);

    // relay context: its own (possibly wrong) previous estimates
    const std::vector<int>& rctx1 = (c == 0) ? a1 : est1[c - 1];
    const std::vector<int>& rctx2 = (c == 0) ? a2 : est2[c - 1];
    const std::uint64_t rh1 = cb.seq_hash(rctx1), rh2 = cb.seq_hash(rctx2);

    std::vector<int> x1_tx(n), x2_tx(n);
    for (int k = 0; k < n; ++k) {
      x1_tx[k] = cb.x1_letter(ub1, h1, ctx1[k], k);
      x2_tx[k] = cb.x2_letter(ub2, h2, ctx2[k], k);
      x3_blk[c][k] = cb.x3_letter(rh1, rh2, rctx1[k], rctx2[k], k);
      const std::size_t row =
          (static_cast<std::size_t>(x1_tx[k]) * nx2 + x2_tx[k]) * nx3 + x3_blk[c][k];
      const int pair = draw_from_row(ch_rows[row], ch_rng.next_u01());
      y_blk[c][k] = pair / ny3;
      y3_blk[c][k] = pair % ny3;
    }

    if (c >= B) break;  // relay has nothing new to decode in the last block

    // relay channel decoding: unique bin pair jointly typical with its own
    // context, its own transmission, and the received y3
    std::vector<std::vector<int>> cw1(ctx.bins1, std::vector<int>(n));
    for (int u = 0; u < ctx.bins1; ++u)
      for (int k = 0; k < n; ++k) cw1[u][k] = cb.x1_letter(u, rh1, rctx1[k], k);
    std::vector<std::vector<int>> cw2(ctx.bins2, std::vector<int>(n));
    for (int u = 0; u < ctx.bins2; ++u)
      for (int k = 0; k < n; ++k) cw2[u][k] = cb.x2_letter(u, rh2, rctx2[k], k);

    std::vector<std::size_t> base(n);
    for (int k = 0; k < n; ++k) {
      base[k] = rc.strides[0] * rctx1[k] + rc.strides[1] * rctx2[k] +
                rc.strides[4] * x3_blk[c][k] + rc.strides[5] * y3_blk[c][k];
    }

    int found = 0, dec_u1 = 0, dec_u2 = 0;
    for (int ua = 0; ua < ctx.bins1 && found < 2; ++ua) {
      for (int ub = 0; ub < ctx.bins2 && found < 2; ++ub) {
        bool ok = true;
        for (int k = 0; k < n; ++k) {
          const std::size_t cell =
              base[k] + rc.strides[2] * cw1[ua][k] + rc.strides[3] * cw2[ub][k];
          if (!rc.support[cell]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        std::fill(rc_counts.begin(), rc_counts.end(), 0);
        for (int k = 0; k < n; ++k) {
          ++rc_counts[base[k] + rc.strides[2] * cw1[ua][k] + rc.strides[3] * cw2[ub][k]];
        }
        if (!rc.counts_typical(rc_counts, n)) continue;
        if (found == 0) {
          dec_u1 = ua;
          dec_u2 = ub;
        }
        ++found;
      }
    }
    const bool chan_correct = found == 1 && dec_u1 == u1[c] && dec_u2 == u2[c];
    if (want_trace) {
      out.trace.push_back({trial, c + 1, "relay_channel", verdict_name(found, chan_correct)});
    }

    // relay source decoding: unique bin-consistent pair typical with w3
    const RefTable& rs = ctx.t_relay_src;
    std::vector<const std::vector<std::pair<int, int>>*> options(n);
    for (int k = 0; k < n; ++k) options[k] = &ctx.pairs_by_w3[w3[c][k]];
    bool enumerable = true;
    for (int k = 0; k < n; ++k) {
      if (options[k]->empty()) enumerable = false;  // cannot happen for sampled w3
    }

    int sfound = 0;
    std::vector<int> t1(n), t2(n), best1, best2;
    std::vector<int> rs_counts(rs.probs.size(), 0);
    if (enumerable) {
      std::vector<int> pick(n, 0);
      do {
        fill_candidate(pick, options, t1, t2);
        if (cb.bin1(t1) != dec_u1 || cb.bin2(t2) != dec_u2) continue;
        std::fill(rs_counts.begin(), rs_counts.end(), 0);
        for (int k = 0; k < n; ++k) {
          ++rs_counts[rs.strides[0] * t1[k] + rs.strides[1] * t2[k] + rs.strides[2] * w3[c][k]];
        }
        if (!rs.counts_typical(rs_counts, n)) continue;
        if (sfound == 0) {
          best1 = t1;
          best2 = t2;
        }
        ++sfound;
      } while (sfound < 2 && next_candidate(pick, options));
    }
    if (sfound == 0) {
      // decoding failed outright; commit to the first admissible sequence so
      // the protocol can keep running (the block is already in error)
      for (int k = 0; k < n; ++k) {
        best1.push_back((*options[k])[0].first);
        best2.push_back((*options[k])[0].second);
      }
    }
    est1[c] = best1;
    est2[c] = best2;
    const bool src_correct = sfound == 1 && best1 == s1[c] && best2 == s2[c];
    if (want_trace) {
      out.trace.push_back({trial, c + 1, "relay_source", verdict_name(sfound, src_correct)});
    }
    if (found != 1 || sfound != 1 || est1[c] != s1[c] || est2[c] != s2[c]) {
      ++out.relay_block_errors;
    }
  }

  // --- destination: backward decoding -------------------------------------
  const RefTable& td = ctx.t_dest;
  std::vector<std::vector<int>> d1(B), d2(B);
  std::vector<int> dest_found(B, 0);
  std::vector<int> dt1(n), dt2(n);
  std::vector<int> td_counts(td.probs.size(), 0);

  for (int b = B - 1; b >= 0; --b) {
    const int un1 = (b == B - 1) ? 0 : cb.bin1(d1[b + 1]);
    const int un2 = (b == B - 1) ? 0 : cb.bin2(d2[b + 1]);
    const std::vector<int>& y_next = y_blk[b + 1];

    std::vector<const std::vector<std::pair<int, int>>*> options(n);
    for (int k = 0; k < n; ++k) options[k] = &ctx.pairs_by_w[w[b][k]];

    int dfound = 0;
    std::vector<int> best1, best2;
    std::vector<int> pick(n, 0);
    do {
      fill_candidate(pick, options, dt1, dt2);
      const std::uint64_t h1 = cb.seq_hash(dt1), h2 = cb.seq_hash(dt2);
      bool ok = true;
      std::fill(td_counts.begin(), td_counts.end(), 0);
      for (int k = 0; k < n; ++k) {
        const int cx1 = cb.x1_letter(un1, h1, dt1[k], k);
        const int cx2 = cb.x2_letter(un2, h2, dt2[k], k);
        const int cx3 = cb.x3_letter(h1, h2, dt1[k], dt2[k], k);
        const std::size_t cell = td.strides[0] * dt1[k] + td.strides[1] * dt2[k] +
                                 td.strides[2] * w[b][k] + td.strides[3] * cx1 +
                                 td.strides[4] * cx2 + td.strides[5] * cx3 +
                                 td.strides[6] * y_next[k];
        if (!td.support[cell]) {
          ok = false;
          break;
        }
        ++td_counts[cell];
      }
      if (!ok || !td.counts_typical(td_counts, n)) continue;
      if (dfound == 0) {
        best1 = dt1;
        best2 = dt2;
      }
      ++dfound;
    } while (dfound < 2 && next_candidate(pick, options));

    if (dfound == 0) {
      for (int k = 0; k < n; ++k) {
        best1.push_back((*options[k])[0].first);
        best2.push_back((*options[k])[0].second);
      }
    }
    d1[b] = best1;
    d2[b] = best2;
    dest_found[b] = dfound;
  }

  for (int b = 0; b < B; ++b) {
    const bool correct = dest_found[b] == 1 && d1[b] == s1[b] && d2[b] == s2[b];
    if (!correct) ++out.dest_block_errors;
  }
  // destination trace rows appear in decode order (last block first)
  if (want_trace) {
    for (int b = B - 1; b >= 0; --b) {
      const bool correct = dest_found[b] == 1 && d1[b] == s1[b] && d2[b] == s2[b];
      out.trace.push_back({trial, b + 1, "destination", verdict_name(dest_found[b], correct)});
    }
  }

  out.session_error = out.relay_block_errors > 0 || out.dest_block_errors > 0;
  return out;
}

}  // namespace

SimReport run_thm2_sim(const SourceModel& src, const InputChainThm2& chain,
                       const ChannelModel& ch, const SimConfig& cfg, Exec exec,
                       std::vector<TraceRow>* trace) {
  const SimContext ctx = make_context(src, chain, ch, cfg);
  const std::int64_t T = cfg.trials;
  std::vector<TrialResult> slots(T);
  const bool par = exec == Exec::parallel;
  const bool want_trace = trace != nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (std::int64_t t = 0; t < T; ++t) {
    slots[t] = run_trial(ctx, t, want_trace);
  }
  (void)par;

  SimReport rep;
  rep.config = cfg;
  rep.bins1 = ctx.bins1;
  rep.bins2 = ctx.bins2;
  rep.blocks_total = T * cfg.blocks;
  for (std::int64_t t = 0; t < T; ++t) {
    rep.relay_block_errors += slots[t].relay_block_errors;
    rep.dest_block_errors += slots[t].dest_block_errors;
    rep.session_errors += slots[t].session_error ? 1 : 0;
    if (want_trace) {
      trace->insert(trace->end(), slots[t].trace.begin(), slots[t].trace.end());
    }
  }
  rep.relay_block_error_rate = static_cast<double>(rep.relay_block_errors) / rep.blocks_total;
  rep.dest_block_error_rate = static_cast<double>(rep.dest_block_errors) / rep.blocks_total;
  rep.session_error_rate = static_cast<double>(rep.session_errors) / T;

  const double z = wilson_z();
  const double nt = static_cast<double>(T);
  const double ph = rep.session_error_rate;
  const double denom = 1.0 + z * z / nt;
  const double center = (ph + z * z / (2.0 * nt)) / denom;
  const double half =
      z * std::sqrt(ph * (1.0 - ph) / nt + z * z / (4.0 * nt * nt)) / denom;
  rep.wilson_low = std::max(0.0, center - half);
  rep.wilson_high = std::min(1.0, center + half);
  // the endpoints at 0 and 1 successes are exactly 0 and 1; keep them clean
  if (rep.session_errors == 0) rep.wilson_low = 0.0;
  if (rep.session_errors == T) rep.wilson_high = 1.0;
  return rep;
}

UncodedReport run_uncoded_cpm_somarc(std::int64_t trials, std::uint64_t seed, Exec exec) {
  if (trials < 1) throw std::invalid_argument("trial count must be >= 1");
  std::int64_t errors = 0;
  const bool par = exec == Exec::parallel;
  const std::uint64_t base = mix64(seed, 0x01c0dedULL);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : errors) if (par)
#endif
  for (std::int64_t t = 0; t < trials; ++t) {
    const double u = u01(mix64(base, static_cast<std::uint64_t>(t)));
    // uniform over the three admissible pairs (0,0), (0,1), (1,1)
    const int s1 = u < 2.0 / 3.0 ? 0 : 1;
    const int s2 = u < 1.0 / 3.0 ? 0 : 1;
    const int ys = s1 + s2;  // x1 = s1, x2 = s2 over the adder output
    const int r1 = ys == 2 ? 1 : 0;
    const int r2 = ys >= 1 ? 1 : 0;
    if (r1 != s1 || r2 != s2) ++errors;
  }
  (void)par;

  UncodedReport rep;
  rep.trials = trials;
  rep.errors = errors;
  rep.error_rate = static_cast<double>(errors) / static_cast<double>(trials);
  return rep;
}

}  // namespace jscc
