#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "argmine/params.hpp"

namespace argmine {

enum class Family { Static, Contextual, Transformer, Mock };

const char* to_string(Family f);
Family family_from_string(const std::string& s);

// Epoch budget by embedding family: transformers fine-tune briefly, randomly
// initialised heads over frozen vectors train much longer.
int epoch_cap(Family f);

inline constexpr int kSingleMaxLen = 250;
inline constexpr int kPairMaxLen = 500;

// Padded token-level embedding matrix for one input. Rows past real_len are
// zero for static/contextual/mock backends and padding-token embeddings for
// transformer backends; the mask marks real tokens.
struct EncodedInput {
  Eigen::MatrixXd tokens;  // max_len x dim
  Eigen::VectorXd mask;    // max_len, 1.0 real / 0.0 pad
  int max_len = 0;
  int real_len = 0;
  int cls_position = -1;            // >= 0: designated classification position
  std::vector<std::int32_t> rows;   // per real position: backend row id, -1 if none
};

struct BackendSpec {
  std::string backend_id;
  Family family = Family::Mock;
  int dimension = 0;         // required for mock; derived from files otherwise
  std::string weights_path;  // required for static/contextual/transformer
};

// Uniform interface from clause text to EncodedInput. Instances are read-only
// after load except for trainable parameters, which belong to exactly one
// training run at a time; concurrent runs work on clones.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;

  const std::string& backend_id() const { return id_; }
  Family family() const { return family_; }
  int dimension() const { return dim_; }
  // True for families that fine-tune backend weights end-to-end.
  bool trainable() const { return family_ == Family::Transformer; }
  int max_epochs() const { return epoch_cap(family_); }
  bool frozen() const { return trainable_param_count() == 0; }

  std::vector<std::string> tokenize(const std::string& text) const;

  EncodedInput encode_single(const std::string& text) const;
  EncodedInput encode_pair(const std::string& text_a, const std::string& text_b) const;

  // Trainable surface; empty for fully frozen backends.
  virtual std::vector<ParamView> trainable_params() { return {}; }
  virtual std::size_t trainable_param_count() const { return 0; }
  // Receives d(loss)/d(token matrix) for one encoded input and accumulates
  // into the backend's gradient buffers.
  virtual void accumulate_input_grad(const EncodedInput& input,
                                     const Eigen::MatrixXd& grad_tokens);

  virtual std::unique_ptr<EmbeddingBackend> clone() const = 0;

 protected:
  EmbeddingBackend(std::string id, Family family, int dim)
      : id_(std::move(id)), family_(family), dim_(dim) {}

  struct Token {
    std::string text;
    std::int32_t row = -1;
  };

  virtual std::vector<Token> native_tokenize(const std::string& text) const = 0;
  virtual Eigen::VectorXd token_vector(const Token& token) const = 0;
  // Separator used to join pair inputs; nullopt joins with nothing.
  virtual std::optional<Token> separator_token() const;
  // Token prepended as the designated classification position, if any.
  virtual std::optional<Token> cls_token() const { return std::nullopt; }
  // Fill rows [from, max_len) of an already-sized matrix.
  virtual void fill_padding(Eigen::MatrixXd& tokens, int from) const;

 private:
  EncodedInput assemble(std::vector<Token> tokens, int max_len) const;

  std::string id_;
  Family family_;
  int dim_;
};

// Hermetic deterministic backend: token vectors in [-1, 1]^d derived from a
// stable hash of the token string. Exists so the whole suite runs with no
// downloads.
class MockBackend final : public EmbeddingBackend {
 public:
  explicit MockBackend(int dimension, std::string id = "mock");

  static Eigen::VectorXd embed_token(const std::string& token, int dimension);

  std::unique_ptr<EmbeddingBackend> clone() const override;

 protected:
  std::vector<Token> native_tokenize(const std::string& text) const override;
  Eigen::VectorXd token_vector(const Token& token) const override;
};

// Frozen lookup over a text vector table (one token + d floats per line).
// Out-of-vocabulary tokens map to the zero vector.
class StaticBackend final : public EmbeddingBackend {
 public:
  StaticBackend(std::string id, const std::filesystem::path& vector_file);

  std::size_t vocabulary_size() const { return vocab_.size(); }
  std::unique_ptr<EmbeddingBackend> clone() const override;

 protected:
  std::vector<Token> native_tokenize(const std::string& text) const override;
  Eigen::VectorXd token_vector(const Token& token) const override;

 private:
  struct Table {
    std::map<std::string, std::int32_t> index;
    Eigen::MatrixXd vectors;  // vocab x dim
  };
  StaticBackend(std::string id, std::shared_ptr<const Table> table);

  std::shared_ptr<const Table> table_;
  const std::map<std::string, std::int32_t>& vocab_;
};

// Frozen multi-layer lookup with a learned mixture: softmax-weighted sum of
// the layer vectors times a global scale. The mixture scalars train with the
// head; the layer table never changes.
class ContextualBackend final : public EmbeddingBackend {
 public:
  ContextualBackend(std::string id, const std::filesystem::path& layered_file);

  int layer_count() const;
  Eigen::VectorXd mixture_weights() const;  // softmax of the logits
  double scale() const { return gamma_; }

  std::vector<ParamView> trainable_params() override;
  std::size_t trainable_param_count() const override;
  void accumulate_input_grad(const EncodedInput& input,
                             const Eigen::MatrixXd& grad_tokens) override;

  std::unique_ptr<EmbeddingBackend> clone() const override;

 protected:
  std::vector<Token> native_tokenize(const std::string& text) const override;
  Eigen::VectorXd token_vector(const Token& token) const override;

 private:
  struct Table {
    std::map<std::string, std::int32_t> index;
    std::vector<Eigen::MatrixXd> layers;  // each vocab x dim
  };
  ContextualBackend(std::string id, std::shared_ptr<const Table> table);

  std::shared_ptr<const Table> table_;
  // mixture parameters and their gradients
  Eigen::VectorXd mix_logits_;
  Eigen::VectorXd mix_logits_grad_;
  double gamma_ = 1.0;
  double gamma_grad_ = 0.0;
};

// Adapter over an externally supplied wordpiece checkpoint: greedy
// longest-match subword tokenization, [CLS] classification position, [SEP]
// joins, padding rows carry the [PAD] embedding. The embedding table
// fine-tunes end-to-end with the head.
class TransformerBackend final : public EmbeddingBackend {
 public:
  TransformerBackend(std::string id, const std::filesystem::path& checkpoint_file);

  std::size_t vocabulary_size() const { return index_.size(); }

  std::vector<ParamView> trainable_params() override;
  std::size_t trainable_param_count() const override;
  void accumulate_input_grad(const EncodedInput& input,
                             const Eigen::MatrixXd& grad_tokens) override;

  std::unique_ptr<EmbeddingBackend> clone() const override;

 protected:
  std::vector<Token> native_tokenize(const std::string& text) const override;
  Eigen::VectorXd token_vector(const Token& token) const override;
  std::optional<Token> separator_token() const override;
  std::optional<Token> cls_token() const override;
  void fill_padding(Eigen::MatrixXd& tokens, int from) const override;

 private:
  std::map<std::string, std::int32_t> index_;
  Eigen::MatrixXd table_;  // vocab x dim, trainable
  Eigen::MatrixXd table_grad_;
  std::int32_t pad_row_ = -1, unk_row_ = -1, cls_row_ = -1, sep_row_ = -1;
};

// Lowercasing whitespace + punctuation splitter used by the rule-based
// tokenizers.
std::vector<std::string> rule_split(const std::string& text, bool lowercase);

// Builds a backend from its spec, resolving relative weight paths against
// ARGMINE_CACHE when set.
std::shared_ptr<EmbeddingBackend> make_backend(const BackendSpec& spec);

// Family convention for the well-known backend ids used in the experiment
// grid (glove, elmo, legal-bert variants); nullopt for unknown ids.
std::optional<Family> family_for_known_id(const std::string& backend_id);

}  // namespace argmine
