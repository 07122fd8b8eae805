#include <stdio.h>
#include <string.h>

#include "trade_ffi.h"

#define CHECK(cond)                                            \
  do {                                                         \
    if (!(cond)) {                                             \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                \
    }                                                          \
  } while (0)

int main(void) {
  TradeHandle *t = NULL;
  CHECK(trade_construct(3, 17, 1000000, 1, &t) == TRADE_STATUS_OK);
  size_t volume = 0, points = 0;
  CHECK(trade_volume(t, &volume) == TRADE_STATUS_OK && volume == 17);
  CHECK(trade_foundation_size(t, &points) == TRADE_STATUS_OK && points == 17);
  int valid = 0;
  CHECK(trade_verify(t, 1, 3, &valid) == TRADE_STATUS_OK && valid == 1);

  size_t needed = 0;
  CHECK(trade_write(t, TRADE_FORMAT_TEXT, 0, NULL, 0, &needed) == TRADE_STATUS_BUFFER_TOO_SMALL);
  char text[8192];
  CHECK(needed <= sizeof text);
  CHECK(trade_write(t, TRADE_FORMAT_TEXT, 0, text, sizeof text, &needed) == TRADE_STATUS_OK);
  CHECK(strncmp(text, "trade mu=3 k=3 t=2\n", 19) == 0);
  trade_free(t);

  TradeExistence e;
  char cite[64];
  CHECK(trade_solve(5, 18, &e, cite, sizeof cite, &needed) == TRADE_STATUS_OK);
  CHECK(e == TRADE_EXISTENCE_OPEN_IN_PAPER && strcmp(cite, "Theorem 19") == 0);

  CHECK(trade_construct(3, 55, 1000000, 1, &t) == TRADE_STATUS_NOT_FOUND);
  CHECK(trade_parse("not a trade", &t) == TRADE_STATUS_PARSE_ERROR);
  CHECK(strcmp(trade_status_message(TRADE_STATUS_OK), "ok") == 0);
  puts("ok");
  return 0;
}
