#pragma once

#include <span>
#include <vector>

#include "kgtype/tensor.hpp"

namespace kgtype {

// One LSTM direction. Gate rows are stacked [input; forget; cell; output],
// so all three tensors have 4*hidden rows.
struct LstmParams {
  Mat w_in;   // 4H x input_dim
  Mat w_rec;  // 4H x H
  Vec bias;   // 4H

  std::size_t hidden() const { return bias.size() / 4; }
};

// Question encoder: token embedding table, the two LSTM directions and the
// attention vector of the aggregation layer. The last token-table row is the
// reserved UNK embedding.
struct EncoderParams {
  Mat token_table;  // (vocab + 1) x input_dim
  LstmParams fwd;
  LstmParams bwd;
  Vec att;  // 2H

  std::size_t hidden() const { return fwd.hidden(); }
  std::size_t input_dim() const { return token_table.cols; }
  std::size_t unk_row() const { return token_table.rows - 1; }
};

EncoderParams zeros_like(const EncoderParams& p);

// ||psi|| is 1, or 0 when the pre-normalization attention response vanishes.
struct QuestionEncoding {
  Mat q;     // n x 2H, per-token concatenated LSTM states
  Vec psi;   // n, normalized attention weights
  Vec qvec;  // 2H, attention-weighted row sum of q
};

// Forward-pass activations kept for backpropagation.
struct LstmTrace {
  Mat gates;   // n x 4H, post-activation
  Mat cells;   // n x H
  Mat tanh_c;  // n x H
  Mat hidden;  // n x H
};

struct EncoderTrace {
  std::vector<int> tokens;
  Mat inputs;  // n x input_dim
  LstmTrace fwd;
  LstmTrace bwd;
  Vec psi_raw;
  double psi_norm = 0.0;
  QuestionEncoding enc;
};

// Runs both LSTM directions and the aggregation layer. Throws on an empty
// token list.
QuestionEncoding encode_question(const EncoderParams& params, std::span<const int> tokens);
EncoderTrace encode_question_traced(const EncoderParams& params, std::span<const int> tokens);

// Backpropagates d_loss/d_qvec through aggregation, both LSTMs and the token
// embedding lookup, accumulating into `grads` (same shapes as the params).
void encoder_backward(const EncoderParams& params, const EncoderTrace& trace,
                      std::span<const double> d_qvec, EncoderParams& grads);

}  // namespace kgtype
