#include "nfzwda/error.hpp"

namespace nfzwda {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::MissingRoot: return "MissingRoot";
    case ErrorCode::UnreadableFile: return "UnreadableFile";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::DuplicateWord: return "DuplicateWord";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MixedConfig: return "MixedConfig";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::EmptyTraining: return "EmptyTraining";
    case ErrorCode::EmptyTest: return "EmptyTest";
    case ErrorCode::UnknownAuthor: return "UnknownAuthor";
    case ErrorCode::NoSegments: return "NoSegments";
    case ErrorCode::EmptyResults: return "EmptyResults";
  }
  return "Unknown";
}

}  // namespace nfzwda
