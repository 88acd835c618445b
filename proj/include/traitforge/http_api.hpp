// Copyright 2026 The TraitForge Authors
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

// JSON-over-HTTP binding of AnnotationService.
//
//   GET  /api/next?annotator=ID[&trait=T]  200 assignment | 204 pool exhausted
//   POST /api/annotate  {sample_id, annotator, trait, score}  200 {seq}
//   POST /api/own-text  {annotator, text}  200 {sample_id, seq, truncated}
//   GET  /api/progress
//   GET  /api/traits
//
// Errors carry {"error": message}: 400 invalid input, 404 unknown sample,
// 409 duplicate annotation, 422 rejected own text.

#pragma once

#include <string>

#include "httplib.h"
#include "json.hpp"
#include "traitforge/annotation_server.hpp"

namespace traitforge {

namespace detail {

inline void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline int http_status(ServiceError::Kind kind) {
  switch (kind) {
    case ServiceError::Kind::kInvalid: return 400;
    case ServiceError::Kind::kNotFound: return 404;
    case ServiceError::Kind::kConflict: return 409;
    case ServiceError::Kind::kRejected: return 422;
  }
  return 400;
}

// Runs fn, mapping exceptions to error responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const ServiceError& e) {
    send_json(res, http_status(e.kind()), {{"error", e.what()}});
  } catch (const Json::exception& e) {
    send_json(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
  } catch (const DataError& e) {
    send_json(res, 400, {{"error", e.what()}});
  } catch (const std::exception& e) {
    log::error("request failed: ", e.what());
    send_json(res, 500, {{"error", "internal error"}});
  }
}

inline TraitId trait_field(const Json& j, const char* key) {
  const auto name = j.at(key).get<std::string>();
  auto t = parse_trait(name);
  if (!t) throw ServiceError(ServiceError::Kind::kInvalid, "unknown trait '" + name + "'");
  return *t;
}

inline Json trait_list(const std::vector<TraitId>& traits) {
  Json out = Json::array();
  for (TraitId t : traits) out.push_back(trait_name(t));
  return out;
}

}  // namespace detail

inline Json to_json(const Assignment& a) {
  return Json{{"sample_id", a.sample_id},
              {"text", a.text},
              {"assigned_trait", a.assigned ? std::string(trait_name(*a.assigned)) : "free"},
              {"remaining_choice", detail::trait_list(a.remaining_choice)}};
}

inline Json to_json(const Progress& p) {
  Json traits = Json::object();
  for (TraitId t : kAllTraits) traits[std::string(trait_name(t))] = p.trait_counts[trait_index(t)];
  return Json{{"traits", traits},
              {"annotators", p.annotator_counts},
              {"mean_annotations_per_sample", p.mean_annotations_per_sample},
              {"annotations", p.annotations},
              {"pool_size", p.pool_size},
              {"last_seq", p.last_seq}};
}

inline Json traits_json() {
  Json out = Json::array();
  for (const auto& d : kTraitDescriptions) {
    out.push_back({{"name", trait_name(d.trait)},
                   {"label", trait_label(d.trait)},
                   {"description", d.description}});
  }
  return out;
}

inline void mount_api(httplib::Server& server, AnnotationService& service) {
  using httplib::Request;
  using httplib::Response;

  server.Get("/api/next", [&service](const Request& req, Response& res) {
    detail::guarded(res, [&] {
      const std::string annotator = req.get_param_value("annotator");
      std::optional<TraitId> trait;
      if (req.has_param("trait")) {
        const std::string name = req.get_param_value("trait");
        trait = parse_trait(name);
        if (!trait) throw ServiceError(ServiceError::Kind::kInvalid, "unknown trait '" + name + "'");
      }
      auto next = service.next(annotator, trait);
      if (!next) {
        res.status = 204;
        return;
      }
      detail::send_json(res, 200, to_json(*next));
    });
  });

  server.Post("/api/annotate", [&service](const Request& req, Response& res) {
    detail::guarded(res, [&] {
      const Json body = Json::parse(req.body);
      const auto& score = body.at("score");
      if (!score.is_number_integer()) {
        throw ServiceError(ServiceError::Kind::kInvalid, "score must be an integer");
      }
      const std::uint64_t seq =
          service.annotate(body.at("sample_id").get<std::string>(),
                           body.at("annotator").get<std::string>(),
                           detail::trait_field(body, "trait"), score.get<int>());
      detail::send_json(res, 200, {{"seq", seq}});
    });
  });

  server.Post("/api/own-text", [&service](const Request& req, Response& res) {
    detail::guarded(res, [&] {
      const Json body = Json::parse(req.body);
      auto r = service.own_text(body.at("annotator").get<std::string>(),
                                body.at("text").get<std::string>());
      detail::send_json(res, 200,
                        {{"sample_id", r.sample_id},
                         {"seq", r.seq},
                         {"truncated", r.truncated},
                         {"sentence_count", r.sentence_count}});
    });
  });

  server.Get("/api/progress", [&service](const Request&, Response& res) {
    detail::guarded(res, [&] { detail::send_json(res, 200, to_json(service.progress())); });
  });

  server.Get("/api/traits", [](const Request&, Response& res) {
    detail::send_json(res, 200, traits_json());
  });
}

// Blocks until server.stop() is called from another thread.
inline bool serve_http(httplib::Server& server, AnnotationService& service,
                       const std::string& host, int port, const std::string& static_dir = "") {
  mount_api(server, service);
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
    throw DataError("cannot serve static directory '" + static_dir + "'");
  }
  log::info("listening on ", host, ":", port);
  return server.listen(host, port);
}

}  // namespace traitforge
