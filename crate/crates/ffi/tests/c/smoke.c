#include <stdio.h>
#include <string.h>

#include "twolocal.h"

#define CHECK(cond)                                            \
  do {                                                         \
    if (!(cond)) {                                             \
      fprintf(stderr, "failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                \
    }                                                          \
  } while (0)

int main(void) {
  TwolocalContext *ctx = NULL;
  CHECK(twolocal_context_new(2, 1, 1, &ctx) == TWOLOCAL_STATUS_OK);

  int64_t conductor = -1;
  CHECK(twolocal_conductor(ctx, "[pi^-2]", &conductor) == TWOLOCAL_STATUS_OK);
  CHECK(conductor == 1);

  int32_t ok = 0;
  CHECK(twolocal_weil_check(ctx, "T", "1+T", &ok) == TWOLOCAL_STATUS_OK);
  CHECK(ok == 1);

  size_t rank = 0;
  CHECK(twolocal_gram_rank(ctx, TWOLOCAL_PAIRING_DUAL, 0, 0, 1, -1, 0, &rank) == TWOLOCAL_STATUS_OK);
  CHECK(rank == 1);

  TwolocalStatus st = twolocal_conductor(ctx, "[pi^", &conductor);
  CHECK(st == TWOLOCAL_STATUS_PARSE);
  CHECK(strcmp(twolocal_status_name(st), "Parse") == 0);
  CHECK(strlen(twolocal_last_error()) > 0);

  char *response = NULL;
  CHECK(twolocal_run_json("{\"argv\": [\"conductor\", \"[pi^-4]\"]}", &response) == TWOLOCAL_STATUS_OK);
  CHECK(strstr(response, "\"conductor\":1") != NULL);
  twolocal_string_free(response);

  twolocal_context_free(ctx);
  puts("ok");
  return 0;
}
