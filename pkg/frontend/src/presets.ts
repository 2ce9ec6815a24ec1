/** Bundled example documents; kept in sync with the shipped network files
 *  (a test compares them against ../networks/).
 */

import { NetworkDoc } from "./schema.js";

export const TWO_NODE: NetworkDoc = {
  "excitations": [
    {
      "node": 1,
      "r_index": 1
    },
    {
      "node": 2,
      "r_index": 2
    }
  ],
  "modules": [
    {
      "den": [
        1.0
      ],
      "from": 2,
      "num": [
        0.0,
        0.4
      ],
      "orders": {
        "delay": 1,
        "den": 1,
        "num": 1
      },
      "status": "parametrized",
      "to": 1
    },
    {
      "den": [
        1.0
      ],
      "from": 1,
      "num": [
        0.0,
        0.5
      ],
      "orders": {
        "delay": 1,
        "den": 1,
        "num": 1
      },
      "status": "parametrized",
      "to": 2
    }
  ],
  "nodes": [
    "w1",
    "w2"
  ],
  "noise": {
    "H_entries": [
      {
        "col": 1,
        "den": [
          1.0
        ],
        "num": [
          1.0
        ],
        "orders": {
          "delay": 0,
          "den": 2,
          "num": 2
        },
        "row": 1,
        "status": "parametrized"
      },
      {
        "col": 2,
        "den": [
          1.0
        ],
        "num": [
          0.0,
          0.4
        ],
        "orders": {
          "delay": 1,
          "den": 2,
          "num": 2
        },
        "row": 1,
        "status": "parametrized"
      },
      {
        "col": 2,
        "den": [
          1.0
        ],
        "num": [
          1.0
        ],
        "orders": {
          "delay": 0,
          "den": 2,
          "num": 2
        },
        "row": 2,
        "status": "parametrized"
      }
    ],
    "cov": [
      [
        1.0,
        0.0
      ],
      [
        0.0,
        0.8
      ]
    ]
  },
  "predictor": {
    "D": [
      1
    ],
    "Y": [
      1,
      2
    ],
    "param_map": {
      "G": [
        {
          "col": 1,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 1,
            "den": 2,
            "num": 2
          },
          "row": 2,
          "status": "parametrized"
        }
      ],
      "H": [
        {
          "col": 1,
          "den": [
            1.0
          ],
          "num": [
            1.0
          ],
          "orders": {
            "delay": 0,
            "den": 2,
            "num": 2
          },
          "row": 1,
          "status": "parametrized"
        },
        {
          "col": 2,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 1,
            "den": 2,
            "num": 2
          },
          "row": 1,
          "status": "parametrized"
        },
        {
          "col": 1,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 1,
            "den": 2,
            "num": 2
          },
          "row": 2,
          "status": "parametrized"
        },
        {
          "col": 2,
          "den": [
            1.0
          ],
          "num": [
            1.0
          ],
          "orders": {
            "delay": 0,
            "den": 2,
            "num": 2
          },
          "row": 2,
          "status": "parametrized"
        }
      ],
      "T": [
        {
          "col": 1,
          "den": [
            1.0
          ],
          "num": [
            1.0
          ],
          "orders": {
            "delay": 0,
            "den": 2,
            "num": 2
          },
          "row": 1,
          "status": "parametrized"
        },
        {
          "col": 2,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 1,
            "den": 2,
            "num": 2
          },
          "row": 1,
          "status": "parametrized"
        },
        {
          "col": 2,
          "den": [
            1.0
          ],
          "num": [
            1.0
          ],
          "row": 2,
          "status": "known"
        }
      ]
    },
    "rows_independent": true,
    "target": {
      "i": 1,
      "j": 2
    },
    "target_block_independent": true
  }
} as unknown as NetworkDoc;

export const FIVE_NODE: NetworkDoc = {
  "excitations": [
    {
      "node": 1,
      "r_index": 1
    },
    {
      "node": 2,
      "r_index": 2
    },
    {
      "node": 3,
      "r_index": 3
    },
    {
      "node": 4,
      "r_index": 4
    }
  ],
  "modules": [
    {
      "den": [
        1.0
      ],
      "from": 1,
      "num": [
        0.0,
        0.5
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 2
    },
    {
      "den": [
        1.0
      ],
      "from": 3,
      "num": [
        0.0,
        0.4
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 2
    },
    {
      "den": [
        1.0
      ],
      "from": 2,
      "num": [
        0.0,
        0.6
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 3
    },
    {
      "den": [
        1.0
      ],
      "from": 4,
      "num": [
        0.0,
        0.5
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 3
    },
    {
      "den": [
        1.0,
        -0.3
      ],
      "from": 1,
      "num": [
        0.0,
        0.8
      ],
      "orders": {
        "delay": 1,
        "den": 1,
        "num": 1
      },
      "status": "parametrized",
      "to": 5
    },
    {
      "den": [
        1.0,
        0.2
      ],
      "from": 2,
      "num": [
        0.0,
        -0.6
      ],
      "orders": {
        "delay": 1,
        "den": 1,
        "num": 1
      },
      "status": "parametrized",
      "to": 5
    },
    {
      "den": [
        1.0,
        -0.25
      ],
      "from": 3,
      "num": [
        0.0,
        0.7
      ],
      "orders": {
        "delay": 1,
        "den": 1,
        "num": 1
      },
      "status": "parametrized",
      "to": 5
    },
    {
      "den": [
        1.0,
        0.35
      ],
      "from": 4,
      "num": [
        0.0,
        0.5
      ],
      "orders": {
        "delay": 1,
        "den": 1,
        "num": 1
      },
      "status": "parametrized",
      "to": 5
    }
  ],
  "nodes": [
    "u1",
    "u2",
    "u3",
    "u4",
    "y1"
  ],
  "noise": {
    "H_entries": [
      {
        "col": 5,
        "den": [
          1.0,
          -0.5
        ],
        "num": [
          1.0,
          0.3
        ],
        "orders": {
          "delay": 0,
          "den": 1,
          "num": 1
        },
        "row": 5,
        "status": "parametrized"
      }
    ],
    "cov": [
      [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.0,
        0.0,
        0.0,
        0.5
      ]
    ]
  },
  "predictor": {
    "D": [
      1,
      2,
      3,
      4
    ],
    "Y": [
      5
    ],
    "param_map": {
      "G": [
        {
          "col": 1,
          "den": [
            1.0,
            -0.3
          ],
          "num": [
            0.0,
            0.8
          ],
          "orders": {
            "delay": 1,
            "den": 1,
            "num": 1
          },
          "row": 5,
          "status": "parametrized"
        },
        {
          "col": 2,
          "den": [
            1.0,
            0.2
          ],
          "num": [
            0.0,
            -0.6
          ],
          "orders": {
            "delay": 1,
            "den": 1,
            "num": 1
          },
          "row": 5,
          "status": "parametrized"
        },
        {
          "col": 3,
          "den": [
            1.0,
            -0.25
          ],
          "num": [
            0.0,
            0.7
          ],
          "orders": {
            "delay": 1,
            "den": 1,
            "num": 1
          },
          "row": 5,
          "status": "parametrized"
        },
        {
          "col": 4,
          "den": [
            1.0,
            0.35
          ],
          "num": [
            0.0,
            0.5
          ],
          "orders": {
            "delay": 1,
            "den": 1,
            "num": 1
          },
          "row": 5,
          "status": "parametrized"
        }
      ],
      "H": [
        {
          "col": 1,
          "den": [
            1.0,
            -0.5
          ],
          "num": [
            1.0,
            0.3
          ],
          "orders": {
            "delay": 0,
            "den": 1,
            "num": 1
          },
          "row": 5,
          "status": "parametrized"
        }
      ],
      "T": []
    },
    "rows_independent": true,
    "target": {
      "i": 1,
      "j": 5
    },
    "target_block_independent": true
  }
} as unknown as NetworkDoc;

export const SIX_NODE: NetworkDoc = {
  "excitations": [
    {
      "node": 5,
      "r_index": 1
    }
  ],
  "modules": [
    {
      "den": [
        1.0,
        -0.6
      ],
      "from": 2,
      "num": [
        0.0,
        0.5
      ],
      "orders": {
        "delay": 1,
        "den": 1,
        "num": 1
      },
      "status": "parametrized",
      "to": 1
    },
    {
      "den": [
        1.0
      ],
      "from": 3,
      "num": [
        0.0,
        0.4
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 1
    },
    {
      "den": [
        1.0
      ],
      "from": 4,
      "num": [
        0.0,
        0.5
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 1
    },
    {
      "den": [
        1.0
      ],
      "from": 5,
      "num": [
        0.0,
        0.5
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 2
    },
    {
      "den": [
        1.0
      ],
      "from": 2,
      "num": [
        0.0,
        0.6
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 3
    },
    {
      "den": [
        1.0
      ],
      "from": 6,
      "num": [
        0.0,
        0.5
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 3
    },
    {
      "den": [
        1.0
      ],
      "from": 6,
      "num": [
        0.0,
        0.6
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 4
    },
    {
      "den": [
        1.0
      ],
      "from": 1,
      "num": [
        0.0,
        0.4
      ],
      "orders": {
        "delay": 1,
        "den": 0,
        "num": 1
      },
      "status": "parametrized",
      "to": 5
    }
  ],
  "nodes": [
    "w1",
    "w2",
    "w3",
    "w4",
    "w5",
    "w6"
  ],
  "noise": {
    "H_entries": [
      {
        "col": 1,
        "den": [
          1.0
        ],
        "num": [
          1.0
        ],
        "orders": {
          "delay": 0,
          "den": 1,
          "num": 1
        },
        "row": 1,
        "status": "parametrized"
      },
      {
        "col": 2,
        "den": [
          1.0
        ],
        "num": [
          0.0,
          0.4
        ],
        "orders": {
          "delay": 1,
          "den": 1,
          "num": 1
        },
        "row": 1,
        "status": "parametrized"
      },
      {
        "col": 2,
        "den": [
          1.0
        ],
        "num": [
          1.0
        ],
        "orders": {
          "delay": 0,
          "den": 1,
          "num": 1
        },
        "row": 2,
        "status": "parametrized"
      },
      {
        "col": 3,
        "den": [
          1.0
        ],
        "num": [
          1.0
        ],
        "orders": {
          "delay": 0,
          "den": 1,
          "num": 1
        },
        "row": 3,
        "status": "parametrized"
      }
    ],
    "cov": [
      [
        0.3,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.3,
        0.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.0,
        0.5,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0
      ],
      [
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0
      ]
    ]
  },
  "predictor": {
    "D": [
      2,
      3
    ],
    "Y": [
      1,
      2
    ],
    "param_map": {
      "G": [
        {
          "col": 2,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 1,
            "den": 1,
            "num": 1
          },
          "row": 1,
          "status": "parametrized"
        },
        {
          "col": 3,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 1,
            "den": 1,
            "num": 1
          },
          "row": 1,
          "status": "parametrized"
        },
        {
          "col": 3,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 3,
            "den": 3,
            "num": 4
          },
          "row": 2,
          "status": "parametrized"
        }
      ],
      "H": [
        {
          "col": 1,
          "den": [
            1.0
          ],
          "num": [
            1.0
          ],
          "orders": {
            "delay": 0,
            "den": 1,
            "num": 1
          },
          "row": 1,
          "status": "parametrized"
        },
        {
          "col": 2,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 1,
            "den": 1,
            "num": 1
          },
          "row": 1,
          "status": "parametrized"
        },
        {
          "col": 1,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 2,
            "den": 3,
            "num": 3
          },
          "row": 2,
          "status": "parametrized"
        },
        {
          "col": 2,
          "den": [
            1.0
          ],
          "num": [
            1.0
          ],
          "orders": {
            "delay": 0,
            "den": 3,
            "num": 4
          },
          "row": 2,
          "status": "parametrized"
        }
      ],
      "T": [
        {
          "col": 1,
          "den": [
            1.0
          ],
          "num": [
            0.0
          ],
          "orders": {
            "delay": 1,
            "den": 3,
            "num": 2
          },
          "row": 2,
          "status": "parametrized"
        }
      ]
    },
    "rows_independent": true,
    "target": {
      "i": 2,
      "j": 1
    },
    "target_block_independent": true
  }
} as unknown as NetworkDoc;

export const PRESETS: Record<string, NetworkDoc> = {
  "two-node": TWO_NODE,
  "five-node input structure": FIVE_NODE,
  "six-node": SIX_NODE,
};
