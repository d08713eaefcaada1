#pragma once

#define FRBD_VERSION "0.1.0"
