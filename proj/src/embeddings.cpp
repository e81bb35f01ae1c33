#include "argmine/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "argmine/errors.hpp"
#include "argmine/random.hpp"

namespace argmine {

const char* to_string(Family f) {
  switch (f) {
    case Family::Static: return "static";
    case Family::Contextual: return "contextual";
    case Family::Transformer: return "transformer";
    case Family::Mock: return "mock";
  }
  return "mock";
}

Family family_from_string(const std::string& s) {
  if (s == "static") return Family::Static;
  if (s == "contextual") return Family::Contextual;
  if (s == "transformer") return Family::Transformer;
  if (s == "mock") return Family::Mock;
  throw ConfigError("unknown embedding family: \"" + s + "\"");
}

int epoch_cap(Family f) {
  switch (f) {
    case Family::Transformer: return 10;
    case Family::Contextual: return 20;
    case Family::Static: return 150;
    case Family::Mock: return 150;
  }
  return 150;
}

std::vector<std::string> rule_split(const std::string& text, bool lowercase) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      flush();
    } else if (c < 0x80 && !std::isalnum(c)) {
      flush();
      tokens.emplace_back(1, static_cast<char>(c));
    } else {
      current.push_back(lowercase && c < 0x80
                            ? static_cast<char>(std::tolower(c))
                            : static_cast<char>(c));
    }
  }
  flush();
  return tokens;
}

// ---------------------------------------------------------------------------
// base encoding logic

std::optional<EmbeddingBackend::Token> EmbeddingBackend::separator_token() const {
  return Token{"[SEP]", -1};
}

void EmbeddingBackend::fill_padding(Eigen::MatrixXd&, int) const {
  // rows are already zero
}

void EmbeddingBackend::accumulate_input_grad(const EncodedInput&, const Eigen::MatrixXd&) {}

std::vector<std::string> EmbeddingBackend::tokenize(const std::string& text) const {
  std::vector<std::string> out;
  for (auto& t : native_tokenize(text)) out.push_back(t.text);
  return out;
}

EncodedInput EmbeddingBackend::assemble(std::vector<Token> tokens, int max_len) const {
  EncodedInput in;
  in.max_len = max_len;
  in.real_len = static_cast<int>(tokens.size());
  in.tokens = Eigen::MatrixXd::Zero(max_len, dim_);
  in.mask = Eigen::VectorXd::Zero(max_len);
  in.rows.reserve(tokens.size());
  for (int t = 0; t < in.real_len; ++t) {
    in.tokens.row(t) = token_vector(tokens[t]).transpose();
    in.mask[t] = 1.0;
    in.rows.push_back(tokens[t].row);
  }
  fill_padding(in.tokens, in.real_len);
  if (cls_token()) in.cls_position = 0;
  return in;
}

EncodedInput EmbeddingBackend::encode_single(const std::string& text) const {
  auto tokens = native_tokenize(text);
  const auto cls = cls_token();
  const std::size_t budget = kSingleMaxLen - (cls ? 1 : 0);
  if (tokens.size() > budget) tokens.resize(budget);
  if (cls) tokens.insert(tokens.begin(), *cls);
  return assemble(std::move(tokens), kSingleMaxLen);
}

EncodedInput EmbeddingBackend::encode_pair(const std::string& text_a,
                                           const std::string& text_b) const {
  auto a = native_tokenize(text_a);
  auto b = native_tokenize(text_b);
  const auto cls = cls_token();
  const auto sep = separator_token();
  const std::size_t budget = kPairMaxLen - (cls ? 1 : 0) - (sep ? 1 : 0);

  // balanced tail-truncation, longer member first
  while (a.size() + b.size() > budget) {
    if (a.size() > b.size())
      a.pop_back();
    else
      b.pop_back();
  }

  std::vector<Token> joined;
  joined.reserve(a.size() + b.size() + 2);
  if (cls) joined.push_back(*cls);
  joined.insert(joined.end(), a.begin(), a.end());
  if (sep) joined.push_back(*sep);
  joined.insert(joined.end(), b.begin(), b.end());
  return assemble(std::move(joined), kPairMaxLen);
}

// ---------------------------------------------------------------------------
// mock

MockBackend::MockBackend(int dimension, std::string id)
    : EmbeddingBackend(std::move(id), Family::Mock, dimension) {
  if (dimension <= 0) throw ConfigError("mock backend needs a positive dimension");
}

Eigen::VectorXd MockBackend::embed_token(const std::string& token, int dimension) {
  Eigen::VectorXd v(dimension);
  std::uint64_t state = mix64(stable_hash64(token));
  for (int i = 0; i < dimension; ++i) {
    const double u = static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
    v[i] = 2.0 * u - 1.0;
  }
  return v;
}

std::vector<EmbeddingBackend::Token> MockBackend::native_tokenize(
    const std::string& text) const {
  std::vector<Token> out;
  for (auto& w : rule_split(text, /*lowercase=*/true)) out.push_back({std::move(w), -1});
  if (out.empty()) throw EmptyText("text has no tokens after normalization");
  return out;
}

Eigen::VectorXd MockBackend::token_vector(const Token& token) const {
  return embed_token(token.text, dimension());
}

std::unique_ptr<EmbeddingBackend> MockBackend::clone() const {
  return std::make_unique<MockBackend>(dimension(), backend_id());
}

// ---------------------------------------------------------------------------
// vector-file parsing helpers

namespace {

struct LineFields {
  std::string token;
  std::vector<double> values;
};

// token followed by whitespace-separated decimal floats
LineFields parse_vector_line(const std::string& line, int line_no,
                             const std::string& file) {
  LineFields out;
  const char* p = line.c_str();
  while (*p && std::isspace(static_cast<unsigned char>(*p))) ++p;
  const char* start = p;
  while (*p && !std::isspace(static_cast<unsigned char>(*p))) ++p;
  out.token.assign(start, p);
  if (out.token.empty())
    throw MalformedVectorFile(file + " line " + std::to_string(line_no) + ": empty token");
  while (*p) {
    while (*p && std::isspace(static_cast<unsigned char>(*p))) ++p;
    if (!*p) break;
    char* end = nullptr;
    const double v = std::strtod(p, &end);
    if (end == p)
      throw MalformedVectorFile(file + " line " + std::to_string(line_no) +
                                ": non-numeric value near \"" +
                                std::string(p).substr(0, 12) + "\"");
    out.values.push_back(v);
    p = end;
  }
  return out;
}

std::ifstream open_vector_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vector file: " + path.string());
  return in;
}

}  // namespace

// ---------------------------------------------------------------------------
// static lookup

namespace {

struct RawTable {
  std::map<std::string, std::int32_t> index;
  std::vector<std::vector<double>> rows;
  int dim = 0;
};

RawTable read_raw_table(std::istream& in, const std::string& file, int values_per_row,
                        int& first_line_dim, int start_line) {
  RawTable table;
  std::string line;
  int line_no = start_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = parse_vector_line(line, line_no, file);
    if (values_per_row < 0 && first_line_dim < 0)
      first_line_dim = static_cast<int>(fields.values.size());
    const int expected = values_per_row >= 0 ? values_per_row : first_line_dim;
    if (expected == 0 || static_cast<int>(fields.values.size()) != expected)
      throw MalformedVectorFile(file + " line " + std::to_string(line_no) + ": expected " +
                                std::to_string(expected) + " values, got " +
                                std::to_string(fields.values.size()));
    if (!table.index.emplace(fields.token, static_cast<std::int32_t>(table.rows.size())).second)
      throw MalformedVectorFile(file + " line " + std::to_string(line_no) +
                                ": duplicate token \"" + fields.token + "\"");
    table.rows.push_back(std::move(fields.values));
  }
  if (table.rows.empty()) throw MalformedVectorFile(file + ": no vectors");
  table.dim = values_per_row >= 0 ? values_per_row : first_line_dim;
  return table;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows, int cols,
                          int col_offset = 0) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), c) = rows[r][col_offset + c];
  return m;
}

}  // namespace

std::shared_ptr<const StaticBackend::Table> StaticBackend::load_table(
    const std::filesystem::path& vector_file) {
  auto in = open_vector_file(vector_file);
  int first_dim = -1;
  auto raw = read_raw_table(in, vector_file.string(), -1, first_dim, 0);
  auto table = std::make_shared<Table>();
  table->index = std::move(raw.index);
  table->vectors = to_matrix(raw.rows, raw.dim);
  return table;
}

StaticBackend::StaticBackend(std::string id, const std::filesystem::path& vector_file)
    : StaticBackend(std::move(id), load_table(vector_file)) {}

StaticBackend::StaticBackend(std::string id, std::shared_ptr<const Table> table)
    : EmbeddingBackend(std::move(id), Family::Static,
                       static_cast<int>(table->vectors.cols())),
      table_(std::move(table)) {}

std::vector<EmbeddingBackend::Token> StaticBackend::native_tokenize(
    const std::string& text) const {
  std::vector<Token> out;
  for (auto& w : rule_split(text, /*lowercase=*/true)) {
    auto it = table_->index.find(w);
    out.push_back({std::move(w), it == table_->index.end() ? -1 : it->second});
  }
  if (out.empty()) throw EmptyText("text has no tokens after normalization");
  return out;
}

Eigen::VectorXd StaticBackend::token_vector(const Token& token) const {
  if (token.row < 0) return Eigen::VectorXd::Zero(dimension());
  return table_->vectors.row(token.row).transpose();
}

std::unique_ptr<EmbeddingBackend> StaticBackend::clone() const {
  return std::unique_ptr<EmbeddingBackend>(new StaticBackend(backend_id(), table_));
}

// ---------------------------------------------------------------------------
// contextual (layered lookup + learned mixture)

std::shared_ptr<const ContextualBackend::Table> ContextualBackend::load_table(
    const std::filesystem::path& layered_file) {
  auto in = open_vector_file(layered_file);
  const std::string file = layered_file.string();

  std::string header;
  if (!std::getline(in, header))
    throw MalformedVectorFile(file + ": missing \"layered <layers> <dim>\" header");
  int layers = 0, dim = 0;
  {
    char tag[16] = {0};
    if (std::sscanf(header.c_str(), "%15s %d %d", tag, &layers, &dim) != 3 ||
        std::string(tag) != "layered" || layers < 1 || dim < 1)
      throw MalformedVectorFile(file + ": bad header \"" + header + "\"");
  }

  int unused = -1;
  auto raw = read_raw_table(in, file, layers * dim, unused, 1);

  auto table = std::make_shared<Table>();
  table->index = std::move(raw.index);
  for (int l = 0; l < layers; ++l) table->layers.push_back(to_matrix(raw.rows, dim, l * dim));
  return table;
}

ContextualBackend::ContextualBackend(std::string id, const std::filesystem::path& layered_file)
    : ContextualBackend(std::move(id), load_table(layered_file)) {}

ContextualBackend::ContextualBackend(std::string id, std::shared_ptr<const Table> table)
    : EmbeddingBackend(std::move(id), Family::Contextual,
                       static_cast<int>(table->layers.front().cols())),
      table_(std::move(table)) {
  const auto layers = static_cast<Eigen::Index>(table_->layers.size());
  mix_logits_ = Eigen::VectorXd::Zero(layers);
  mix_logits_grad_ = Eigen::VectorXd::Zero(layers);
}

int ContextualBackend::layer_count() const {
  return static_cast<int>(table_->layers.size());
}

Eigen::VectorXd ContextualBackend::mixture_weights() const {
  const Eigen::VectorXd shifted = mix_logits_.array() - mix_logits_.maxCoeff();
  Eigen::VectorXd w = shifted.array().exp();
  return w / w.sum();
}

std::vector<ParamView> ContextualBackend::trainable_params() {
  return {{"mix_logits", mix_logits_.data(), mix_logits_grad_.data(),
           static_cast<std::size_t>(mix_logits_.size())},
          {"mix_scale", &gamma_, &gamma_grad_, 1}};
}

std::size_t ContextualBackend::trainable_param_count() const {
  return static_cast<std::size_t>(mix_logits_.size()) + 1;
}

std::vector<EmbeddingBackend::Token> ContextualBackend::native_tokenize(
    const std::string& text) const {
  // word-level split, case preserved
  std::vector<Token> out;
  for (auto& w : rule_split(text, /*lowercase=*/false)) {
    auto it = table_->index.find(w);
    out.push_back({std::move(w), it == table_->index.end() ? -1 : it->second});
  }
  if (out.empty()) throw EmptyText("text has no tokens after normalization");
  return out;
}

Eigen::VectorXd ContextualBackend::token_vector(const Token& token) const {
  if (token.row < 0) return Eigen::VectorXd::Zero(dimension());
  const Eigen::VectorXd w = mixture_weights();
  Eigen::VectorXd mixed = Eigen::VectorXd::Zero(dimension());
  for (int l = 0; l < layer_count(); ++l)
    mixed += w[l] * table_->layers[l].row(token.row).transpose();
  return gamma_ * mixed;
}

void ContextualBackend::accumulate_input_grad(const EncodedInput& input,
                                              const Eigen::MatrixXd& grad_tokens) {
  const Eigen::VectorXd w = mixture_weights();
  Eigen::VectorXd dw = Eigen::VectorXd::Zero(layer_count());
  for (int t = 0; t < input.real_len; ++t) {
    const std::int32_t r = input.rows[t];
    if (r < 0) continue;
    const Eigen::RowVectorXd g = grad_tokens.row(t);
    double mixed_dot = 0.0;
    for (int l = 0; l < layer_count(); ++l) {
      const double dot = g.dot(table_->layers[l].row(r));
      dw[l] += gamma_ * dot;
      mixed_dot += w[l] * dot;
    }
    gamma_grad_ += mixed_dot;
  }
  // softmax chain rule into the logits
  const double weighted = dw.dot(w);
  mix_logits_grad_ += (w.array() * (dw.array() - weighted)).matrix();
}

std::unique_ptr<EmbeddingBackend> ContextualBackend::clone() const {
  auto copy = std::unique_ptr<ContextualBackend>(
      new ContextualBackend(backend_id(), table_));
  copy->mix_logits_ = mix_logits_;
  copy->gamma_ = gamma_;
  return copy;
}

// ---------------------------------------------------------------------------
// transformer adapter

TransformerBackend::TransformerBackend(std::string id,
                                       const std::filesystem::path& checkpoint_file)
    : EmbeddingBackend(std::move(id), Family::Transformer, 0) {
  auto in = open_vector_file(checkpoint_file);
  const std::string file = checkpoint_file.string();

  std::string header;
  if (!std::getline(in, header))
    throw MalformedVectorFile(file + ": missing \"wordpiece <dim>\" header");
  int dim = 0;
  {
    char tag[16] = {0};
    if (std::sscanf(header.c_str(), "%15s %d", tag, &dim) != 2 ||
        std::string(tag) != "wordpiece" || dim < 1)
      throw MalformedVectorFile(file + ": bad header \"" + header + "\"");
  }

  int unused = -1;
  auto raw = read_raw_table(in, file, dim, unused, 1);
  index_ = std::move(raw.index);
  table_ = to_matrix(raw.rows, dim);
  table_grad_ = Eigen::MatrixXd::Zero(table_.rows(), table_.cols());

  auto special = [&](const char* name) {
    auto it = index_.find(name);
    if (it == index_.end())
      throw MalformedVectorFile(file + ": checkpoint missing special token " +
                                std::string(name));
    return it->second;
  };
  pad_row_ = special("[PAD]");
  unk_row_ = special("[UNK]");
  cls_row_ = special("[CLS]");
  sep_row_ = special("[SEP]");

  set_dimension(dim);
}

std::vector<ParamView> TransformerBackend::trainable_params() {
  return {{"embedding_table", table_.data(), table_grad_.data(),
           static_cast<std::size_t>(table_.size())}};
}

std::size_t TransformerBackend::trainable_param_count() const {
  return static_cast<std::size_t>(table_.size());
}

std::vector<EmbeddingBackend::Token> TransformerBackend::native_tokenize(
    const std::string& text) const {
  std::vector<Token> out;
  for (const auto& word : rule_split(text, /*lowercase=*/true)) {
    // greedy longest-match wordpiece; a word with no covering pieces is [UNK]
    std::vector<Token> pieces;
    std::size_t pos = 0;
    bool ok = true;
    while (pos < word.size()) {
      std::size_t len = word.size() - pos;
      std::int32_t row = -1;
      std::string matched;
      while (len > 0) {
        std::string candidate = (pos == 0 ? "" : "##") + word.substr(pos, len);
        auto it = index_.find(candidate);
        if (it != index_.end()) {
          row = it->second;
          matched = std::move(candidate);
          break;
        }
        --len;
      }
      if (row < 0) {
        ok = false;
        break;
      }
      pieces.push_back({std::move(matched), row});
      pos += len;
    }
    if (ok) {
      out.insert(out.end(), pieces.begin(), pieces.end());
    } else {
      out.push_back({"[UNK]", unk_row_});
    }
  }
  if (out.empty()) throw EmptyText("text has no tokens after normalization");
  return out;
}

Eigen::VectorXd TransformerBackend::token_vector(const Token& token) const {
  const std::int32_t r = token.row >= 0 ? token.row : unk_row_;
  return table_.row(r).transpose();
}

std::optional<EmbeddingBackend::Token> TransformerBackend::separator_token() const {
  return Token{"[SEP]", sep_row_};
}

std::optional<EmbeddingBackend::Token> TransformerBackend::cls_token() const {
  return Token{"[CLS]", cls_row_};
}

void TransformerBackend::fill_padding(Eigen::MatrixXd& tokens, int from) const {
  for (Eigen::Index t = from; t < tokens.rows(); ++t) tokens.row(t) = table_.row(pad_row_);
}

void TransformerBackend::accumulate_input_grad(const EncodedInput& input,
                                               const Eigen::MatrixXd& grad_tokens) {
  for (int t = 0; t < input.real_len; ++t) {
    const std::int32_t r = input.rows[t];
    if (r >= 0) table_grad_.row(r) += grad_tokens.row(t);
  }
}

std::unique_ptr<EmbeddingBackend> TransformerBackend::clone() const {
  return std::make_unique<TransformerBackend>(*this);
}

// ---------------------------------------------------------------------------
// factory

namespace {

std::filesystem::path resolve_weights(const std::string& path_str) {
  std::filesystem::path path(path_str);
  if (std::filesystem::exists(path)) return path;
  if (path.is_relative()) {
    if (const char* cache = std::getenv("ARGMINE_CACHE")) {
      const auto cached = std::filesystem::path(cache) / path;
      if (std::filesystem::exists(cached)) return cached;
    }
  }
  return path;  // let the loader produce the IoError
}

}  // namespace

std::shared_ptr<EmbeddingBackend> make_backend(const BackendSpec& spec) {
  switch (spec.family) {
    case Family::Mock:
      return std::make_shared<MockBackend>(spec.dimension > 0 ? spec.dimension : 32,
                                           spec.backend_id);
    case Family::Static:
      if (spec.weights_path.empty())
        throw ConfigError("backend \"" + spec.backend_id + "\" needs weights_path");
      return std::make_shared<StaticBackend>(spec.backend_id,
                                             resolve_weights(spec.weights_path));
    case Family::Contextual:
      if (spec.weights_path.empty())
        throw ConfigError("backend \"" + spec.backend_id + "\" needs weights_path");
      return std::make_shared<ContextualBackend>(spec.backend_id,
                                                 resolve_weights(spec.weights_path));
    case Family::Transformer:
      if (spec.weights_path.empty())
        throw ConfigError("backend \"" + spec.backend_id + "\" needs weights_path");
      return std::make_shared<TransformerBackend>(spec.backend_id,
                                                  resolve_weights(spec.weights_path));
  }
  throw ConfigError("unknown backend family");
}

std::optional<Family> family_for_known_id(const std::string& backend_id) {
  std::string id;
  for (char c : backend_id) id.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (id == "mock") return Family::Mock;
  if (id == "glove") return Family::Static;
  if (id == "elmo") return Family::Contextual;
  if (id == "legal-bert-base" || id == "legal-bert-echr" || id == "legal-bert-harv" ||
      id == "c-legal-bert-harv")
    return Family::Transformer;
  return std::nullopt;
}

}  // namespace argmine
