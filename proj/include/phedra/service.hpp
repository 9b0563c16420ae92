#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "phedra/construction.hpp"
#include "phedra/deformation.hpp"
#include "phedra/model_file.hpp"

namespace phedra {

struct HttpResponse {
  int status = 200;
  std::string body;  // JSON {"ok": ..., "data" | "error": ...}
};

using QueryParams = std::map<std::string, std::string>;

/// Immutable snapshot of a posted model.
struct StoredModel {
  ModelFile file;
  Construction construction;
  DeformationPlan plan;
  FlexionInterval interval;
};

/// JSON endpoints under /api/models. Status codes: 400 schema, 404 unknown
/// id or route, 405 method, 409 numeric domain, 422 validation.
class DesignService {
 public:
  HttpResponse handle(std::string_view method, std::string_view path, const QueryParams& query,
                      std::string_view body);

  std::size_t size() const;

 private:
  HttpResponse create(std::string_view body);
  std::shared_ptr<const StoredModel> find(const std::string& id) const;

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const StoredModel>> models_;
  unsigned long next_id_ = 1;
};

// PHEDRA_PORT when set and valid, else 8787.
int default_port();

/// Socket front end for a DesignService.
class ServiceHost {
 public:
  explicit ServiceHost(DesignService& service);
  ~ServiceHost();
  ServiceHost(const ServiceHost&) = delete;
  ServiceHost& operator=(const ServiceHost&) = delete;

  // Binds to host:port (port 0 picks a free one) and returns the port.
  // Throws IoError.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace phedra
