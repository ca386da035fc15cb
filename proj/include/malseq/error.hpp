#pragma once

#include <stdexcept>
#include <string>

namespace malseq {

// Base for every error raised by the library. The stage name lets the CLI
// report which part of the pipeline failed.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

class CorpusError : public Error {
 public:
  explicit CorpusError(const std::string& what) : Error("corpus", what) {}
};

class AlignError : public Error {
 public:
  explicit AlignError(const std::string& what) : Error("align", what) {}
};

class MlError : public Error {
 public:
  explicit MlError(const std::string& what) : Error("ml", what) {}
};

class RulesError : public Error {
 public:
  explicit RulesError(const std::string& what) : Error("rules", what) {}
};

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& what) : Error("eval", what) {}
};

}  // namespace malseq
