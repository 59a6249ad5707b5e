// Copyright 2026 The ldpcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef LDPCOUNT_STATUS_MACROS_H_
#define LDPCOUNT_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define LDP_STATUS_CONCAT_INNER_(a, b) a##b
#define LDP_STATUS_CONCAT_(a, b) LDP_STATUS_CONCAT_INNER_(a, b)

#define LDP_RETURN_IF_ERROR(expr)            \
  do {                                       \
    const absl::Status ldp_status_ = (expr); \
    if (!ldp_status_.ok()) {                 \
      return ldp_status_;                    \
    }                                        \
  } while (0)

#define LDP_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                               \
  if (!tmp.ok()) {                                  \
    return std::move(tmp).status();                 \
  }                                                 \
  lhs = std::move(tmp).value()

#define LDP_ASSIGN_OR_RETURN(lhs, rexpr) \
  LDP_ASSIGN_OR_RETURN_IMPL_(            \
      LDP_STATUS_CONCAT_(ldp_statusor_, __LINE__), lhs, rexpr)

#endif  // LDPCOUNT_STATUS_MACROS_H_
