#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "gase/prompts.hpp"

using namespace gase;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("gase_prompts_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("render_prompt substitutes the input verbatim") {
  const auto tmpl = make_template("t", "Rephrase ... Text:{text}");
  CHECK(render_prompt(tmpl, "A man plays guitar.") == "Rephrase ... Text:A man plays guitar.");
  CHECK(render_prompt(make_template("id", "{text}"), "") == "");
  // leading/trailing whitespace of the input survives
  CHECK(render_prompt(tmpl, " x ") == "Rephrase ... Text: x ");
}

TEST_CASE("default templates carry the shipped prompt wording") {
  const auto& templates = default_templates();
  REQUIRE(templates.size() == 4);
  const auto* para = find_template(templates, "paraphrase");
  REQUIRE(para != nullptr);
  CHECK(para->body.find("Rephrase the following text while maintaining") == 0);
  CHECK(render_prompt(*para, "x").ends_with("Text:x"));

  const auto* summ = find_template(templates, "summarise");
  REQUIRE(summ != nullptr);
  CHECK(summ->body.find("summarise the following text") == 0);
  CHECK(render_prompt(*summ, "x").ends_with("Text:x"));

  const auto* keys = find_template(templates, "keywords");
  REQUIRE(keys != nullptr);
  CHECK(keys->body.find("Extract the keywords from the following sentence") == 0);
  CHECK(render_prompt(*keys, "x").ends_with("Text: x"));

  CHECK(find_template(templates, "paraphrase_reka") != nullptr);
  for (const auto& t : templates) CHECK(placeholder_count(t.body) == 1);
}

TEST_CASE("make_template rejects zero or multiple placeholders") {
  const auto missing = Catch::Matchers::Predicate<error>(
      [](const error& e) { return e.code() == errc::missing_placeholder; });
  CHECK_THROWS_MATCHES(make_template("bad", "no placeholder"), error, missing);
  CHECK_THROWS_MATCHES(make_template("bad", "{text} and {text}"), error, missing);
}

TEST_CASE("extract_payload inverts render_prompt") {
  for (const auto& t : default_templates()) {
    const std::string payload = "some exact payload text";
    const auto extracted = extract_payload(t, render_prompt(t, payload));
    REQUIRE(extracted.has_value());
    CHECK(*extracted == payload);
  }
  CHECK_FALSE(extract_payload(default_templates()[0], "unrelated prompt").has_value());
}

TEST_CASE("template files load with stem ids") {
  const auto dir = temp_dir("load");
  {
    std::ofstream f(dir / "mytmpl.txt");
    f << "Do the thing. Text:{text}\n";
  }
  {
    std::ofstream f(dir / "other.txt");
    f << "Other {text}";
  }
  const auto loaded = load_template_dir(dir);
  REQUIRE(loaded.size() == 2);
  // directory order is sorted by filename
  CHECK(loaded[0].id == "mytmpl");
  CHECK(loaded[0].body == "Do the thing. Text:{text}");  // trailing newline dropped
  CHECK(loaded[1].id == "other");
  std::filesystem::remove_all(dir);
}
