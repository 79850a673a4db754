#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gase/error.hpp"

namespace gase {

inline constexpr std::string_view kPromptPlaceholder = "{text}";

// A template body carries exactly one {text} placeholder.
struct PromptTemplate {
  std::string id;
  std::string body;
};

inline std::size_t placeholder_count(std::string_view body) {
  std::size_t count = 0, pos = 0;
  while ((pos = body.find(kPromptPlaceholder, pos)) != std::string_view::npos) {
    ++count;
    pos += kPromptPlaceholder.size();
  }
  return count;
}

inline PromptTemplate make_template(std::string id, std::string body) {
  const std::size_t n = placeholder_count(body);
  if (n != 1)
    raise(errc::missing_placeholder,
          "template '" + id + "' must contain {text} exactly once, found " + std::to_string(n));
  return PromptTemplate{std::move(id), std::move(body)};
}

// Substitutes the input verbatim; the input itself is never trimmed or escaped.
inline std::string render_prompt(const PromptTemplate& tmpl, std::string_view text) {
  const std::size_t pos = tmpl.body.find(kPromptPlaceholder);
  if (pos == std::string::npos)
    raise(errc::missing_placeholder, "template '" + tmpl.id + "' lacks {text}");
  std::string out;
  out.reserve(tmpl.body.size() + text.size());
  out.append(tmpl.body, 0, pos);
  out.append(text);
  out.append(tmpl.body, pos + kPromptPlaceholder.size(), std::string::npos);
  return out;
}

// If `prompt` was rendered from `tmpl`, returns the substituted payload.
inline std::optional<std::string> extract_payload(const PromptTemplate& tmpl,
                                                  std::string_view prompt) {
  const std::size_t pos = tmpl.body.find(kPromptPlaceholder);
  if (pos == std::string::npos) return std::nullopt;
  const std::string_view prefix = std::string_view(tmpl.body).substr(0, pos);
  const std::string_view suffix =
      std::string_view(tmpl.body).substr(pos + kPromptPlaceholder.size());
  if (prompt.size() < prefix.size() + suffix.size()) return std::nullopt;
  if (prompt.substr(0, prefix.size()) != prefix) return std::nullopt;
  if (prompt.substr(prompt.size() - suffix.size()) != suffix) return std::nullopt;
  return std::string(prompt.substr(prefix.size(), prompt.size() - prefix.size() - suffix.size()));
}

// Default prompt set. The paraphrase/summarise/keywords wording is kept
// exactly as shipped, including the original spelling.
inline const std::vector<PromptTemplate>& default_templates() {
  static const std::vector<PromptTemplate> templates = {
      make_template("paraphrase",
                    "Rephrase the following text while maintaining its original meaning. If the "
                    "text contains only a single word, provide a definition or a synomym. When "
                    "done, check and make sure that the length of the original is approximately "
                    "maintained. Text:{text}"),
      make_template("paraphrase_reka",
                    "Rephrase the following text while maintaining its original meaning. Do not "
                    "provide multiple alternatives. Before you reply, remove any explanations. Do "
                    "only reply with the paraphrased text. If the text contains only a single "
                    "word, provide a definition or a synomym. Text:{text}"),
      make_template("summarise",
                    "summarise the following text. Do not include any meta text and only output "
                    "the summary. If the text is too short to summarise, paraphrase it instead. "
                    "Text:{text}"),
      make_template("keywords",
                    "Extract the keywords from the following sentence. Do NOT inlcude any commas "
                    "or fullstops in your response and do not start your answer with \"keywords\". "
                    "Text: {text}"),
  };
  return templates;
}

inline const PromptTemplate* find_template(const std::vector<PromptTemplate>& templates,
                                           std::string_view id) {
  for (const auto& t : templates)
    if (t.id == id) return &t;
  return nullptr;
}

// One template per plain-text file; the id is the file stem.
inline PromptTemplate load_template_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::storage, "cannot open template file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string body = buf.str();
  // Editors append a trailing newline; the placeholder substitution must stay
  // at the exact position authors wrote, so only a single trailing \n (or
  // \r\n) is dropped.
  if (body.size() >= 2 && body.compare(body.size() - 2, 2, "\r\n") == 0)
    body.erase(body.size() - 2);
  else if (!body.empty() && body.back() == '\n')
    body.pop_back();
  return make_template(path.stem().string(), std::move(body));
}

inline std::vector<PromptTemplate> load_template_dir(const std::filesystem::path& dir) {
  std::vector<PromptTemplate> templates;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) templates.push_back(load_template_file(f));
  return templates;
}

}  // namespace gase
