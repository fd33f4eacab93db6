/* Copyright 2026 The maidvote Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <stdio.h>

#include "maidvote/maidvote.h"

int main(int argc, char** argv) {
  char* out = NULL;
  char* err = NULL;
  int code = mv_cli_run(argc - 1, (const char* const*)(argv + 1), &out, &err);
  if (out) fputs(out, stdout);
  if (err) fputs(err, stderr);
  mv_string_free(out);
  mv_string_free(err);
  return code;
}
