#include <atomic>
#include <string>
#include <thread>

#include "doctest.h"
// Eigen (via fixtures.hpp) before httplib.h, whose resolver headers define _res.
#include "fixtures.hpp"
#include "httplib.h"
#include "json.hpp"

#include "hopebench/error.hpp"
#include "hopebench/translation.hpp"

using namespace hopebench;
using namespace hopebench::dualchannel;

namespace {

const std::string kSource =
    "Tumbu hrdayada śubhāśayagalu Kannada cinema industry ge";
const std::string kEnglish = "Best wishes to the Kannada Cinema Industry from the bottom of my heart";

// Answers every POST with a canned translation and counts the requests.
class FakeTranslator {
 public:
  FakeTranslator() {
    server_.Post("/translate", [this](const httplib::Request& req, httplib::Response& res) {
      ++hits_;
      const auto body = nlohmann::json::parse(req.body);
      const nlohmann::json reply = {
          {"translatedText", "EN(" + body.at("q").get<std::string>() + ")"}};
      res.set_content(reply.dump(), "application/json");
    });
    server_.Post("/broken", [this](const httplib::Request&, httplib::Response& res) {
      ++hits_;
      res.status = 500;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeTranslator() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  int hits() const { return hits_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

}  // namespace

TEST_SUITE("translation") {

TEST_CASE("identity returns the input as a miss") {
  auto p = TranslationProvider::identity();
  const auto t = p.translate(kSource);
  CHECK(t.text == kSource);
  CHECK(t.miss);
  CHECK_FALSE(t.from_cache);
  CHECK(p.requests() == 0);
}

TEST_CASE("file cache lookups and save") {
  testing::TempDir dir("tr");
  const auto path = dir / "cache.tsv";
  testing::write_file(path, kSource + "\t" + kEnglish + "\r\n\nline\\tone\tfirst\\nsecond\n");
  auto p = TranslationProvider::file_cache(path);
  CHECK(p.cache_size() == 2);
  const auto hit = p.translate(kSource);
  CHECK(hit.text == kEnglish);
  CHECK(hit.from_cache);
  CHECK_FALSE(hit.miss);
  CHECK(p.translate("line\tone").text == "first\nsecond");
  CHECK(p.translate("unknown").miss);

  p.insert("a", "b");
  p.save();
  auto reloaded = TranslationProvider::file_cache(path);
  CHECK(reloaded.cache_size() == 3);
  CHECK(reloaded.translate("a").text == "b");
  // Saved sorted by source text.
  const auto saved = testing::read_file(path);
  CHECK(saved.find("a\tb\n") < saved.find("line\\tone"));
}

TEST_CASE("missing cache file starts empty") {
  testing::TempDir dir("tr");
  auto p = TranslationProvider::file_cache(dir / "none.tsv");
  CHECK(p.cache_size() == 0);
}

TEST_CASE("malformed cache line is rejected") {
  testing::TempDir dir("tr");
  testing::write_file(dir / "bad.tsv", "no tab here\n");
  CHECK_THROWS_AS(TranslationProvider::file_cache(dir / "bad.tsv"), ValidationError);
  testing::write_file(dir / "bad2.tsv", "a\tb\tc\n");
  CHECK_THROWS_AS(TranslationProvider::file_cache(dir / "bad2.tsv"), ValidationError);
}

TEST_CASE("escape round trip") {
  for (std::string s : {"", "plain", "tab\there", "nl\nand\\back", "\r\n\t\\", "ends\\"}) {
    const auto e = TranslationProvider::escape(s);
    CHECK(e.find('\t') == std::string::npos);
    CHECK(e.find('\n') == std::string::npos);
    CHECK(TranslationProvider::unescape(e) == s);
  }
}

TEST_CASE("http mode caches responses") {
  FakeTranslator server;
  auto p = TranslationProvider::http(server.url("/translate"));
  const auto first = p.translate("namma ooru");
  CHECK(first.text == "EN(namma ooru)");
  CHECK_FALSE(first.miss);
  CHECK_FALSE(first.from_cache);
  const auto second = p.translate("namma ooru");
  CHECK(second.text == "EN(namma ooru)");
  CHECK(second.from_cache);
  CHECK(server.hits() == 1);
  CHECK(p.requests() == 1);
  CHECK(p.warnings().empty());
}

TEST_CASE("http mode writes through to the cache file") {
  FakeTranslator server;
  testing::TempDir dir("tr");
  {
    auto p = TranslationProvider::http(server.url("/translate"), dir / "cache.tsv");
    p.translate("ಒಳ್ಳೆಯದಾಗಲಿ");
    p.save();
  }
  auto offline = TranslationProvider::file_cache(dir / "cache.tsv");
  CHECK(offline.translate("ಒಳ್ಳೆಯದಾಗಲಿ").text == "EN(ಒಳ್ಳೆಯದಾಗಲಿ)");
}

TEST_CASE("failed requests fall back to the input with a warning") {
  FakeTranslator server;
  auto p = TranslationProvider::http(server.url("/broken"));
  const auto t = p.translate("hello");
  CHECK(t.text == "hello");
  CHECK(t.miss);
  REQUIRE(p.warnings().size() == 1);
  CHECK(p.warnings()[0].find("HTTP status 500") != std::string::npos);
  CHECK(p.cache_size() == 0);
}

TEST_CASE("only plain http URLs") {
  CHECK_THROWS_AS(TranslationProvider::http("https://example.org/translate"), ValidationError);
  CHECK_THROWS_AS(TranslationProvider::http("ftp://x"), ValidationError);
}

}  // TEST_SUITE
