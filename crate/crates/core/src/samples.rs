//! Reference action sequences used as golden fixtures and prompt examples.

/// Pen-drawn red circle around the canvas center.
pub const RED_CIRCLE: &str = r#"[
  {"action": "moveTo", "x": 35, "y": 45},
  {"action": "click"},
  {"action": "moveTo", "x": 429, "y": 25},
  {"action": "click"},
  {"action": "moveTo", "x": 590, "y": 420},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 640, "y": 420},
  {"action": "moveTo", "x": 665, "y": 445},
  {"action": "moveTo", "x": 665, "y": 495},
  {"action": "moveTo", "x": 640, "y": 520},
  {"action": "moveTo", "x": 590, "y": 520},
  {"action": "moveTo", "x": 565, "y": 495},
  {"action": "moveTo", "x": 565, "y": 445},
  {"action": "moveTo", "x": 590, "y": 420},
  {"action": "mouseUp"}
]"#;

/// Blue rectangle dragged with the rectangle tool.
pub const BLUE_RECTANGLE: &str = r#"[
  {"action": "moveTo", "x": 35, "y": 365},
  {"action": "click"},
  {"action": "moveTo", "x": 477, "y": 25},
  {"action": "click"},
  {"action": "moveTo", "x": 400, "y": 300},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 700, "y": 500},
  {"action": "mouseUp"}
]"#;

/// Four squares, one in each canvas corner.
pub const CORNER_SQUARES: &str = r#"[
  {"action": "moveTo", "x": 35, "y": 365},
  {"action": "click"},
  {"action": "moveTo", "x": 120, "y": 100},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 220, "y": 200},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 870, "y": 100},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 970, "y": 200},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 120, "y": 640},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 220, "y": 740},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 870, "y": 640},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 970, "y": 740},
  {"action": "mouseUp"}
]"#;

/// Red pen circle above a blue rectangle.
pub const CIRCLE_ABOVE_SQUARE: &str = r#"[
  {"action": "moveTo", "x": 35, "y": 445},
  {"action": "click"},
  {"action": "moveTo", "x": 429, "y": 25},
  {"action": "click"},
  {"action": "moveTo", "x": 590, "y": 250},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 640, "y": 250},
  {"action": "moveTo", "x": 665, "y": 275},
  {"action": "moveTo", "x": 665, "y": 325},
  {"action": "moveTo", "x": 640, "y": 350},
  {"action": "moveTo", "x": 590, "y": 350},
  {"action": "moveTo", "x": 565, "y": 325},
  {"action": "moveTo", "x": 565, "y": 275},
  {"action": "moveTo", "x": 590, "y": 250},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 35, "y": 365},
  {"action": "click"},
  {"action": "moveTo", "x": 477, "y": 25},
  {"action": "click"},
  {"action": "moveTo", "x": 515, "y": 470},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 665, "y": 620},
  {"action": "mouseUp"}
]"#;

/// Two rows of three circle-tool drags.
pub const CIRCLE_GRID: &str = r#"[
  {"action": "moveTo", "x": 35, "y": 445},
  {"action": "click"},
  {"action": "moveTo", "x": 200, "y": 200},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 280, "y": 280},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 450, "y": 200},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 530, "y": 280},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 700, "y": 200},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 780, "y": 280},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 200, "y": 460},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 280, "y": 540},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 450, "y": 460},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 530, "y": 540},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 700, "y": 460},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 780, "y": 540},
  {"action": "mouseUp"}
]"#;

/// Pen-drawn house outline with a red fill click inside the roof.
pub const FILLED_HOUSE: &str = r#"[
  {"action": "moveTo", "x": 35, "y": 45},
  {"action": "click"},
  {"action": "moveTo", "x": 400, "y": 300},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 400, "y": 550},
  {"action": "moveTo", "x": 650, "y": 550},
  {"action": "moveTo", "x": 650, "y": 300},
  {"action": "moveTo", "x": 400, "y": 300},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 525, "y": 180},
  {"action": "mouseDown"},
  {"action": "moveTo", "x": 400, "y": 300},
  {"action": "moveTo", "x": 650, "y": 300},
  {"action": "moveTo", "x": 525, "y": 180},
  {"action": "mouseUp"},
  {"action": "moveTo", "x": 35, "y": 205},
  {"action": "click"},
  {"action": "moveTo", "x": 429, "y": 25},
  {"action": "click"},
  {"action": "moveTo", "x": 525, "y": 240},
  {"action": "click"}
]"#;

/// All samples in a fixed order, with a short slug for file names.
pub const ALL: [(&str, &str); 6] = [
    ("red-circle", RED_CIRCLE),
    ("blue-rectangle", BLUE_RECTANGLE),
    ("corner-squares", CORNER_SQUARES),
    ("circle-above-square", CIRCLE_ABOVE_SQUARE),
    ("circle-grid", CIRCLE_GRID),
    ("filled-house", FILLED_HOUSE),
];
