#pragma once

#define AUCTOK_VERSION_MAJOR 0
#define AUCTOK_VERSION_MINOR 1
#define AUCTOK_VERSION_PATCH 0
#define AUCTOK_VERSION "0.1.0"
