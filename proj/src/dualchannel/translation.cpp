// Copyright 2026 The hopebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hopebench/translation.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "hopebench/error.hpp"

namespace hopebench::dualchannel {

std::string TranslationProvider::escape(std::string_view field) {
  std::string out;
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string TranslationProvider::unescape(std::string_view field) {
  std::string out;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\' || i + 1 == field.size()) {
      out += field[i];
      continue;
    }
    switch (field[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default:
        out += '\\';
        out += field[i];
    }
  }
  return out;
}

TranslationProvider::TranslationProvider(TranslationProvider&& other) noexcept
    : mode_(other.mode_),
      url_(std::move(other.url_)),
      cache_path_(std::move(other.cache_path_)),
      cache_(std::move(other.cache_)),
      requests_(other.requests_),
      warnings_(std::move(other.warnings_)) {}

TranslationProvider TranslationProvider::identity() {
  return TranslationProvider(TranslationMode::Identity);
}

namespace {

void load_cache(const std::filesystem::path& path,
                std::unordered_map<std::string, std::string>& cache) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(number) +
                            ": expected 'source<TAB>english'");
    }
    cache[TranslationProvider::unescape(std::string_view(line).substr(0, tab))] =
        TranslationProvider::unescape(std::string_view(line).substr(tab + 1));
  }
}

}  // namespace

TranslationProvider TranslationProvider::file_cache(const std::filesystem::path& cache) {
  TranslationProvider p(TranslationMode::FileCache);
  p.cache_path_ = cache;
  load_cache(cache, p.cache_);
  return p;
}

TranslationProvider TranslationProvider::http(std::string url,
                                              std::optional<std::filesystem::path> cache) {
  TranslationProvider p(TranslationMode::Http);
  p.url_ = std::move(url);
  if (p.url_.rfind("http://", 0) != 0) {
    throw ValidationError("translation URL must start with http://, got '" + p.url_ + "'");
  }
  p.cache_path_ = std::move(cache);
  if (p.cache_path_) load_cache(*p.cache_path_, p.cache_);
  return p;
}

std::optional<std::string> TranslationProvider::request(std::string_view text) {
  const auto slash = url_.find('/', 7);
  const std::string origin = slash == std::string::npos ? url_ : url_.substr(0, slash);
  const std::string path = slash == std::string::npos ? "/" : url_.substr(slash);
  httplib::Client client(origin);
  client.set_connection_timeout(5);
  client.set_read_timeout(30);
  const nlohmann::json body = {{"q", std::string(text)}, {"target", "en"}};
  {
    std::unique_lock lock(mutex_);
    ++requests_;
  }
  auto response = client.Post(path, body.dump(), "application/json");
  std::string problem;
  if (!response) {
    problem = "request failed: " + httplib::to_string(response.error());
  } else if (response->status != 200) {
    problem = "HTTP status " + std::to_string(response->status);
  } else {
    try {
      return nlohmann::json::parse(response->body).at("translatedText").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      problem = std::string("bad response: ") + e.what();
    }
  }
  std::unique_lock lock(mutex_);
  warnings_.push_back("translation via " + url_ + " failed (" + problem +
                      "); using the untranslated text");
  return std::nullopt;
}

Translation TranslationProvider::translate(std::string_view text) {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(std::string(text));
    if (it != cache_.end()) return {it->second, true, false};
  }
  if (mode_ == TranslationMode::Http) {
    if (auto english = request(text)) {
      insert(std::string(text), *english);
      return {std::move(*english), false, false};
    }
  }
  return {std::string(text), false, true};
}

void TranslationProvider::insert(std::string source, std::string english) {
  std::unique_lock lock(mutex_);
  cache_[std::move(source)] = std::move(english);
}

void TranslationProvider::save() const {
  if (!cache_path_) return;
  std::vector<std::pair<std::string, std::string>> entries;
  {
    std::shared_lock lock(mutex_);
    entries.assign(cache_.begin(), cache_.end());
  }
  std::sort(entries.begin(), entries.end());
  std::ofstream out(*cache_path_, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write translation cache " + cache_path_->string());
  for (const auto& [source, english] : entries) {
    out << escape(source) << '\t' << escape(english) << '\n';
  }
}

std::size_t TranslationProvider::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

std::size_t TranslationProvider::requests() const {
  std::shared_lock lock(mutex_);
  return requests_;
}

std::vector<std::string> TranslationProvider::warnings() const {
  std::shared_lock lock(mutex_);
  return warnings_;
}

}  // namespace hopebench::dualchannel
