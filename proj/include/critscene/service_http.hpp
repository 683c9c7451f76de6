// Copyright 2026 The critscene Authors
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

#ifndef CRITSCENE__SERVICE_HTTP_HPP_
#define CRITSCENE__SERVICE_HTTP_HPP_

// Kept apart from service.hpp so only binaries that serve HTTP pull in httplib.

#include "critscene/service.hpp"

#include <httplib.h>

#include <memory>
#include <string>

namespace critscene
{

/// Mounts the service on an httplib server with permissive CORS headers.
inline void mount_service(httplib::Server & server, std::shared_ptr<const ScenarioService> service)
{
  server.set_default_headers({
    {"Access-Control-Allow-Origin", "*"},
    {"Access-Control-Allow-Methods", "GET, OPTIONS"},
    {"Access-Control-Allow-Headers", "Content-Type"},
  });
  server.Get(R"(/api(/.*)?)", [service](const httplib::Request & req, httplib::Response & res) {
    ApiRequest api;
    api.path = req.path;
    for (const auto & [key, value] : req.params) {
      api.query.emplace(key, value);
    }
    const ApiResponse out = service->handle(api);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  });
  server.Options(R"(/api(/.*)?)", [](const httplib::Request &, httplib::Response & res) { res.status = 204; });
}

}  // namespace critscene

#endif  // CRITSCENE__SERVICE_HTTP_HPP_
