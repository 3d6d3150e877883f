//! Published efficiency frontiers for four base models, observed on a
//! 48-node grid up to 32768 tokens.

/// Shared grid of every bundled frontier.
pub const BUDGETS: [u64; 48] = [
    0,
    64,
    128,
    192,
    256,
    320,
    384,
    448,
    512,
    576,
    640,
    704,
    768,
    832,
    896,
    960,
    1024,
    2048,
    3072,
    4096,
    5120,
    6144,
    7168,
    8192,
    9216,
    10240,
    11264,
    12288,
    13312,
    14336,
    15360,
    16384,
    17408,
    18432,
    19456,
    20480,
    21504,
    22528,
    23552,
    24576,
    25600,
    26624,
    27648,
    28672,
    29696,
    30720,
    31744,
    32768,
];

pub const DEEPSEEK_1_5B: [f64; 48] = [
    0.06101600796568627,
    0.05281671262254902,
    0.06075367647058823,
    0.07656441482843138,
    0.09422679227941178,
    0.09907322303921567,
    0.11950635723039214,
    0.14104051776960785,
    0.16222426470588236,
    0.17982153799019607,
    0.19957299325980393,
    0.22226179534313725,
    0.23991076899509806,
    0.25617723651960783,
    0.2744064031862745,
    0.2836722579656863,
    0.29287109375,
    0.3738262101715686,
    0.413882506127451,
    0.44010225183823526,
    0.4490253523284314,
    0.4542604932598039,
    0.4631778492647059,
    0.4701803768382353,
    0.4771963082107843,
    0.48008961397058825,
    0.48356885723039217,
    0.48675130208333334,
    0.4884727328431372,
    0.48968098958333334,
    0.49039713541666663,
    0.4909466911764706,
    0.4908088235294118,
    0.4905771292892157,
    0.4908662683823529,
    0.49117647058823527,
    0.4919289981617647,
    0.4914445465686274,
    0.4919002757352941,
    0.4920955882352941,
    0.4919002757352941,
    0.4919289981617647,
    0.4919289981617647,
    0.4919577205882353,
    0.4919002757352941,
    0.4919289981617647,
    0.4920955882352941,
    0.49215303308823527,
];

pub const DEEPSEEK_7B: [f64; 48] = [
    0.06838809742647059,
    0.07453469669117647,
    0.08459520526960784,
    0.09630629595588236,
    0.09808900122549019,
    0.11145450367647058,
    0.14210707720588237,
    0.16989123774509804,
    0.1799383425245098,
    0.2068627450980392,
    0.22867455575980392,
    0.24759880514705881,
    0.26799938725490197,
    0.2935891544117647,
    0.31299019607843137,
    0.33319546568627456,
    0.38615196078431374,
    0.4691272212009804,
    0.50302734375,
    0.5375919117647059,
    0.5522518382352941,
    0.5640356924019608,
    0.5759803921568628,
    0.5929974724264706,
    0.6051547181372549,
    0.61650390625,
    0.6240272671568627,
    0.6303423713235294,
    0.63447265625,
    0.63720703125,
    0.6392252604166667,
    0.64111328125,
    0.64345703125,
    0.6455403645833333,
    0.6470377604166666,
    0.6482747395833333,
    0.6487955729166667,
    0.6512044270833334,
    0.6522460937500001,
    0.6525065104166667,
    0.6532877604166667,
    0.6522460937500001,
    0.6527669270833334,
    0.6535481770833333,
    0.6535481770833333,
    0.6535481770833333,
    0.6532877604166667,
    0.6532877604166667,
];

pub const QWEN3_4B: [f64; 48] = [
    0.05864545036764705,
    0.07844286151960785,
    0.08253484987745098,
    0.09157475490196078,
    0.09366000306372549,
    0.10081380208333333,
    0.10913181678921569,
    0.12006548713235293,
    0.14239813112745098,
    0.16250957414215686,
    0.18545879289215683,
    0.20630935968137254,
    0.22248008578431372,
    0.23359183517156862,
    0.24719860600490196,
    0.25932329963235295,
    0.26839958639705885,
    0.37697610294117645,
    0.4535807291666667,
    0.5027018229166667,
    0.5349207261029412,
    0.5595760569852941,
    0.5795496323529412,
    0.5964384191176471,
    0.6082050398284314,
    0.6200099571078431,
    0.6309244791666666,
    0.6428308823529412,
    0.6487189797794117,
    0.6562059589460785,
    0.6632372089460784,
    0.6686408547794117,
    0.6734145220588235,
    0.6795764399509804,
    0.6835171568627451,
    0.6894416360294119,
    0.693035768995098,
    0.6970358455882353,
    0.7003484987745099,
    0.7034734987745098,
    0.7032781862745098,
    0.7061714920343137,
    0.7074371936274509,
    0.7081533394607843,
    0.7090647977941177,
    0.7103381587009804,
    0.7101064644607843,
    0.707257199754902,
];

pub const QWEN3_8B: [f64; 48] = [
    0.09000842524509803,
    0.10032935049019608,
    0.09675245098039215,
    0.11996208639705883,
    0.1271771599264706,
    0.1278818167892157,
    0.14018267463235295,
    0.16002795649509804,
    0.1714862898284314,
    0.2006414675245098,
    0.21497970281862744,
    0.24749348958333334,
    0.2608475030637255,
    0.2683632046568627,
    0.2772250306372549,
    0.28248697916666665,
    0.29307789522058825,
    0.39007352941176476,
    0.4767539828431373,
    0.5257927389705882,
    0.5632065716911765,
    0.5868183210784313,
    0.6074180453431373,
    0.6239028033088235,
    0.6389916513480391,
    0.6473824295343137,
    0.6582471660539215,
    0.666616881127451,
    0.6744542738970589,
    0.6808746936274509,
    0.6869829963235294,
    0.6924479166666666,
    0.695980775122549,
    0.7023954503676471,
    0.7065142463235294,
    0.7109911151960785,
    0.7135799632352942,
    0.7167777267156862,
    0.7191789215686275,
    0.7239296109068628,
    0.726351868872549,
    0.7280005361519608,
    0.7298598345588236,
    0.7314587162990196,
    0.7330135569852941,
    0.7345473345588236,
    0.7354587928921568,
    0.7288985906862746,
];

/// `(family, values)` for every bundled frontier.
pub const FAMILIES: [(&str, &[f64; 48]); 4] = [
    ("deepseek-1.5b", &DEEPSEEK_1_5B),
    ("deepseek-7b", &DEEPSEEK_7B),
    ("qwen3-4b", &QWEN3_4B),
    ("qwen3-8b", &QWEN3_8B),
];
