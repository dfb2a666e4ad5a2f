#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyrag {

// Base for every error the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class EmptyCorpusError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(what + ": " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class EmptyTextError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class TranslationError : public Error {
public:
    TranslationError(std::string provider, const std::string& what)
        : Error(provider + ": " + what), provider_(std::move(provider)) {}
    const std::string& provider() const { return provider_; }

private:
    std::string provider_;
};

// Inbound translation failed; the original message is kept for diagnostics.
class RoutingError : public Error {
public:
    RoutingError(std::string original_text, std::string lang_code, const std::string& what)
        : Error(what), original_text_(std::move(original_text)), lang_code_(std::move(lang_code)) {}
    const std::string& original_text() const { return original_text_; }
    const std::string& lang_code() const { return lang_code_; }

private:
    std::string original_text_;
    std::string lang_code_;
};

class SelectionError : public Error {
public:
    using Error::Error;
};

class TranscriptionError : public Error {
public:
    using Error::Error;
};

class EmptyTranscriptError : public TranscriptionError {
public:
    using TranscriptionError::TranscriptionError;
};

class UnsupportedLanguageError : public Error {
public:
    explicit UnsupportedLanguageError(const std::string& lang)
        : Error("unsupported language: " + lang), lang_(lang) {}
    const std::string& lang() const { return lang_; }

private:
    std::string lang_;
};

class LlmError : public Error {
public:
    using Error::Error;
};

// Schema violation in an inbound payload; field() names the first offending field.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& what)
        : Error(what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class UnsupportedTypeError : public ParseError {
public:
    explicit UnsupportedTypeError(const std::string& type)
        : ParseError("type", "unsupported message type: " + type) {}
};

class JournalError : public Error {
public:
    JournalError(std::uint64_t offset, const std::string& what)
        : Error(what + " at byte offset " + std::to_string(offset)), offset_(offset) {}
    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t offset_;
};

} // namespace polyrag
