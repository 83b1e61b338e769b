#include "kgtype/encoder.hpp"

#include <cmath>

#include "kgtype/errors.hpp"

namespace kgtype {

namespace {

constexpr double kPsiEpsilon = 1e-12;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// One direction over the token inputs; `reverse` flips the processing order
// while activations stay indexed by original position.
void run_lstm(const LstmParams& p, const Mat& inputs, bool reverse, LstmTrace& trace) {
  const std::size_t n = inputs.rows;
  const std::size_t h = p.hidden();
  const std::size_t in_dim = inputs.cols;

  trace.gates = Mat(n, 4 * h);
  trace.cells = Mat(n, h);
  trace.tanh_c = Mat(n, h);
  trace.hidden = Mat(n, h);

  Vec state_h(h, 0.0), state_c(h, 0.0), z(4 * h);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t t = reverse ? n - 1 - step : step;
    for (std::size_t r = 0; r < 4 * h; ++r) {
      double acc = p.bias[r];
      for (std::size_t j = 0; j < in_dim; ++j) acc += p.w_in(r, j) * inputs(t, j);
      for (std::size_t j = 0; j < h; ++j) acc += p.w_rec(r, j) * state_h[j];
      z[r] = acc;
    }
    for (std::size_t k = 0; k < h; ++k) {
      const double gi = sigmoid(z[k]);
      const double gf = sigmoid(z[h + k]);
      const double gg = std::tanh(z[2 * h + k]);
      const double go = sigmoid(z[3 * h + k]);
      const double c = gf * state_c[k] + gi * gg;
      const double tc = std::tanh(c);
      trace.gates(t, k) = gi;
      trace.gates(t, h + k) = gf;
      trace.gates(t, 2 * h + k) = gg;
      trace.gates(t, 3 * h + k) = go;
      trace.cells(t, k) = c;
      trace.tanh_c(t, k) = tc;
      trace.hidden(t, k) = go * tc;
      state_c[k] = c;
    }
    for (std::size_t k = 0; k < h; ++k) state_h[k] = trace.hidden(t, k);
  }
}

// Backpropagation through time for one direction. `d_hidden` carries the
// external gradient flowing into each h_t; parameter gradients accumulate
// into `grads`, input gradients into `d_inputs`.
void lstm_backward(const LstmParams& p, const Mat& inputs, const LstmTrace& trace, bool reverse,
                   const Mat& d_hidden, LstmParams& grads, Mat& d_inputs) {
  const std::size_t n = inputs.rows;
  const std::size_t h = p.hidden();
  const std::size_t in_dim = inputs.cols;

  Vec dh_rec(h, 0.0), dc_rec(h, 0.0), dz(4 * h);
  for (std::size_t step = n; step-- > 0;) {
    const std::size_t t = reverse ? n - 1 - step : step;
    const bool has_prev = step > 0;
    const std::size_t prev = reverse ? t + 1 : t - 1;

    for (std::size_t k = 0; k < h; ++k) {
      const double gi = trace.gates(t, k);
      const double gf = trace.gates(t, h + k);
      const double gg = trace.gates(t, 2 * h + k);
      const double go = trace.gates(t, 3 * h + k);
      const double tc = trace.tanh_c(t, k);
      const double dh = d_hidden(t, k) + dh_rec[k];
      const double dct = dc_rec[k] + dh * go * (1.0 - tc * tc);
      const double c_prev = has_prev ? trace.cells(prev, k) : 0.0;
      dz[k] = dct * gg * gi * (1.0 - gi);
      dz[h + k] = dct * c_prev * gf * (1.0 - gf);
      dz[2 * h + k] = dct * gi * (1.0 - gg * gg);
      dz[3 * h + k] = dh * tc * go * (1.0 - go);
      dc_rec[k] = dct * gf;
    }

    for (std::size_t r = 0; r < 4 * h; ++r) {
      grads.bias[r] += dz[r];
      for (std::size_t j = 0; j < in_dim; ++j) grads.w_in(r, j) += dz[r] * inputs(t, j);
      if (has_prev)
        for (std::size_t j = 0; j < h; ++j) grads.w_rec(r, j) += dz[r] * trace.hidden(prev, j);
    }
    for (std::size_t j = 0; j < in_dim; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < 4 * h; ++r) acc += p.w_in(r, j) * dz[r];
      d_inputs(t, j) += acc;
    }
    for (std::size_t j = 0; j < h; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < 4 * h; ++r) acc += p.w_rec(r, j) * dz[r];
      dh_rec[j] = acc;
    }
  }
}

}  // namespace

EncoderParams zeros_like(const EncoderParams& p) {
  EncoderParams z;
  z.token_table = Mat(p.token_table.rows, p.token_table.cols);
  z.fwd.w_in = Mat(p.fwd.w_in.rows, p.fwd.w_in.cols);
  z.fwd.w_rec = Mat(p.fwd.w_rec.rows, p.fwd.w_rec.cols);
  z.fwd.bias = Vec(p.fwd.bias.size(), 0.0);
  z.bwd.w_in = Mat(p.bwd.w_in.rows, p.bwd.w_in.cols);
  z.bwd.w_rec = Mat(p.bwd.w_rec.rows, p.bwd.w_rec.cols);
  z.bwd.bias = Vec(p.bwd.bias.size(), 0.0);
  z.att = Vec(p.att.size(), 0.0);
  return z;
}

EncoderTrace encode_question_traced(const EncoderParams& params, std::span<const int> tokens) {
  if (tokens.empty()) throw ConfigError("cannot encode an empty question");
  const std::size_t n = tokens.size();
  const std::size_t h = params.hidden();
  const std::size_t in_dim = params.input_dim();

  EncoderTrace trace;
  trace.tokens.assign(tokens.begin(), tokens.end());
  trace.inputs = Mat(n, in_dim);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t row = static_cast<std::size_t>(tokens[t]);
    for (std::size_t j = 0; j < in_dim; ++j) trace.inputs(t, j) = params.token_table(row, j);
  }

  run_lstm(params.fwd, trace.inputs, false, trace.fwd);
  run_lstm(params.bwd, trace.inputs, true, trace.bwd);

  auto& enc = trace.enc;
  enc.q = Mat(n, 2 * h);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < h; ++k) {
      enc.q(t, k) = trace.fwd.hidden(t, k);
      enc.q(t, h + k) = trace.bwd.hidden(t, k);
    }
  }

  trace.psi_raw.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) trace.psi_raw[t] = dot(enc.q.row(t), params.att);
  double norm_sq = 0.0;
  for (double v : trace.psi_raw) norm_sq += v * v;
  trace.psi_norm = std::sqrt(norm_sq);

  enc.psi.assign(n, 0.0);
  if (trace.psi_norm >= kPsiEpsilon)
    for (std::size_t t = 0; t < n; ++t) enc.psi[t] = trace.psi_raw[t] / trace.psi_norm;

  enc.qvec.assign(2 * h, 0.0);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t j = 0; j < 2 * h; ++j) enc.qvec[j] += enc.psi[t] * enc.q(t, j);
  return trace;
}

QuestionEncoding encode_question(const EncoderParams& params, std::span<const int> tokens) {
  return encode_question_traced(params, tokens).enc;
}

void encoder_backward(const EncoderParams& params, const EncoderTrace& trace,
                      std::span<const double> d_qvec, EncoderParams& grads) {
  const std::size_t n = trace.inputs.rows;
  const std::size_t h = params.hidden();
  const auto& enc = trace.enc;

  // qvec = sum_t psi[t] * q[t,:]
  Mat d_q(n, 2 * h);
  Vec d_psi(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    d_psi[t] = dot(enc.q.row(t), d_qvec);
    for (std::size_t j = 0; j < 2 * h; ++j) d_q(t, j) = enc.psi[t] * d_qvec[j];
  }

  // psi = psi_raw / ||psi_raw||; below the epsilon guard psi is the constant
  // zero vector, so nothing flows back through it.
  Vec d_psi_raw(n, 0.0);
  if (trace.psi_norm >= kPsiEpsilon) {
    const double proj = dot(enc.psi, d_psi);
    for (std::size_t t = 0; t < n; ++t)
      d_psi_raw[t] = (d_psi[t] - enc.psi[t] * proj) / trace.psi_norm;
  }

  // psi_raw = q . att
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < 2 * h; ++j) {
      d_q(t, j) += d_psi_raw[t] * params.att[j];
      grads.att[j] += d_psi_raw[t] * enc.q(t, j);
    }
  }

  // Split q gradient into the two directions and backpropagate through time.
  Mat d_fwd(n, h), d_bwd(n, h);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t k = 0; k < h; ++k) {
      d_fwd(t, k) = d_q(t, k);
      d_bwd(t, k) = d_q(t, h + k);
    }
  }
  Mat d_inputs(n, params.input_dim());
  lstm_backward(params.fwd, trace.inputs, trace.fwd, false, d_fwd, grads.fwd, d_inputs);
  lstm_backward(params.bwd, trace.inputs, trace.bwd, true, d_bwd, grads.bwd, d_inputs);

  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t row = static_cast<std::size_t>(trace.tokens[t]);
    for (std::size_t j = 0; j < params.input_dim(); ++j)
      grads.token_table(row, j) += d_inputs(t, j);
  }
}

}  // namespace kgtype
