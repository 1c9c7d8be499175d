#pragma once

#define OLSREC_VERSION_MAJOR 0
#define OLSREC_VERSION_MINOR 1
#define OLSREC_VERSION_PATCH 0
#define OLSREC_VERSION "0.1.0"
