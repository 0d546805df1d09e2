// High-precision reference values (computed with mpmath, 45 digits).
// Layout: (argument, value).

pub const AIRY_AI: &[(f64, f64)] = &[
    (-100.0, 0.1767533932395528780908),
    (-50.0, -0.1618814236123209239152),
    (-20.0, -0.1764061270779846895902),
    (-15.5, -0.1664479540904197673882),
    (-10.6, -0.3045784649973668729356),
    (-10.5, -0.3119260350510506008546),
    (-10.4, -0.2868054556308297654402),
    (-9.0, -0.02213372154734140367417),
    (-7.5, 0.3217757163806478752673),
    (-6.0, -0.3291451736298231052314),
    (-4.5, 0.2921527810559594668816),
    (-3.0, -0.3788142936776580743472),
    (-2.0, 0.2274074282016855759919),
    (-1.0, 0.5355608832923521187995),
    (-0.5, 0.4757280916105395887986),
    (0.0, 0.3550280538878172392601),
    (0.5, 0.2316936064808334897691),
    (1.0, 0.1352924163128814155241),
    (2.0, 0.03492413042327437913532),
    (3.7, 0.001745572000609978520907),
    (5.0, 0.0001083444281360744173499),
    (6.5, 0.000002795882343204913585460),
    (8.0, 4.692207616099231625649e-8),
    (9.3, 9.892686613164245859237e-10),
    (10.4, 3.049888186593997781295e-11),
    (10.5, 2.202274519283401643530e-11),
    (10.6, 1.587809078467612054357e-11),
    (12.0, 1.393184688875360839049e-13),
    (15.0, 2.164962520737992298989e-18),
    (20.0, 1.691672868670540313554e-27),
    (30.0, 3.208217591550495571075e-49),
    (60.0, 2.783148709496935537098e-136),
    (100.0, 2.634482152088184489551e-291),
];

pub const AIRY_AIP: &[(f64, f64)] = &[
    (-100.0, -0.2422970316605838053991),
    (-50.0, 0.9689898372767490871365),
    (-20.0, 0.8928628567364712383984),
    (-15.5, 0.9049379354302121995067),
    (-10.6, -0.2371320671415941952700),
    (-10.5, 0.09095748739068167287890),
    (-10.4, 0.4065688403750706259653),
    (-9.0, -0.9756639809263315947127),
    (-7.5, 0.3188095066985545962101),
    (-6.0, 0.3459354872813428949298),
    (-4.5, -0.5233625323157477007085),
    (-3.0, 0.3145837692165988136508),
    (-2.0, 0.6182590207416910414063),
    (-1.0, -0.01016056711664520939505),
    (-0.5, -0.2040816703395473861448),
    (0.0, -0.2588194037928067984052),
    (0.5, -0.2249105326646838931360),
    (1.0, -0.1591474412967932127875),
    (2.0, -0.05309038443365363170400),
    (3.7, -0.003466940749027627070161),
    (5.0, -0.0002474138908684624760002),
    (6.5, -0.000007231931466601792559814),
    (8.0, -1.341439297906786574291e-7),
    (9.3, -3.042899875618644229853e-9),
    (10.4, -9.907599519501069101381e-11),
    (10.5, -7.187696781451567091338e-11),
    (10.6, -5.206329628214170838999e-11),
    (12.0, -4.854736554985308462994e-13),
    (15.0, -8.420567954017772766124e-18),
    (20.0, -7.586391625748354960515e-27),
    (30.0, -1.759876581432725982082e-48),
    (60.0, -2.156975811209473787248e-135),
    (100.0, -2.635140361604409933603e-290),
];

pub const AIRY_AI_SCALED: &[(f64, f64)] = &[
    (0.0, 0.3550280538878172392601),
    (0.5, 0.2932771591299473624509),
    (1.0, 0.2635136447491400685713),
    (2.0, 0.2301649186525116059422),
    (5.0, 0.1870021189359434270431),
    (9.0, 0.1622568429042331497849),
    (10.4, 0.1566090137774411643037),
    (10.6, 0.1558780794657651288548),
    (15.0, 0.1430880416996911640470),
    (50.0, 0.1060534697591680414760),
    (200.0, 0.07501041684381093190574),
    (10000.0, 0.02820947623890275694434),
    (100000000.0, 0.002820947917738487585999),
];

pub const AIRY_AIP_SCALED: &[(f64, f64)] = &[
    (0.0, -0.2588194037928067984052),
    (0.5, -0.2846911620919425689464),
    (1.0, -0.3099768889605148473688),
    (2.0, -0.3498882825800874928777),
    (5.0, -0.4270355443519452098421),
    (9.0, -0.4911786827724436477223),
    (10.4, -0.5087463194457969566085),
    (10.6, -0.5111147646888138751267),
    (15.0, -0.5565373843649070997359),
    (50.0, -0.7504406102617341622762),
    (200.0, -1.060901230510904138381),
    (10000.0, -2.820948329126740894597),
    (100000000.0, -28.20947917739192822978),
];

pub const MAP_AIRY: &[(f64, f64)] = &[
    (-8.0, 1.060843693083124538170e-296),
    (-5.0, 1.046161125355076123690e-72),
    (-3.3, 3.179119438720073413898e-21),
    (-3.2, 2.141349972064115846049e-19),
    (-3.1, 1.116040697661260138433e-17),
    (-2.0, 0.00003728885188513032134784),
    (-1.0, 0.3023409268446515318931),
    (-0.5, 0.7261801800315433379074),
    (0.0, 0.5176388075856135968104),
    (0.5, 0.2249459551848171519011),
    (1.0, 0.09292648842274955759493),
    (2.0, 0.02299661258526005614160),
    (3.1, 0.008141528656712406798128),
    (3.2, 0.007535945781324567843141),
    (3.3, 0.006990832011927387290701),
    (4.0, 0.004358642495887147582522),
    (10.0, 0.0004457062814547092390920),
    (50.0, 0.000007978799065317237359566),
    (1000.0, 4.460310287129618204455e-9),
];

pub const MAP_AIRY_PRIME: &[(f64, f64)] = &[
    (-8.0, 2.715096988620088297829e-294),
    (-5.0, 1.045116004186863338860e-70),
    (-3.3, 1.380023998260838096342e-19),
    (-3.2, 8.737635728980498621826e-18),
    (-3.1, 4.272133500823043488459e-16),
    (-2.0, 0.0005874334247829762523860),
    (-1.0, 1.070440822157970861542),
    (-0.5, 0.1904126401520107949531),
    (0.0, -0.7100561077756344785201),
    (0.5, -0.4079886069272788606855),
    (1.0, -0.1553213358072819067629),
    (2.0, -0.02624380392197212711988),
    (3.1, -0.006386071261829098349694),
    (3.2, -0.005740088419954176050048),
    (3.3, -0.005174552980528397727020),
    (4.0, -0.002688154260668623084129),
    (10.0, -0.0001113292907771307139892),
    (50.0, -3.989371607364541369646e-7),
    (1000.0, -1.115077570806711677999e-11),
];

pub const LOG_MAP_AIRY: &[(f64, f64)] = &[
    (-200.0, -10666663.89672574315324),
    (-100.0, -1333330.909965981870717),
    (-40.0, -85331.36811104312219395),
    (-20.0, -10665.04801568820981455),
    (-10.0, -1332.061237723672540790),
    (-5.0, -165.7409993022550276122),
    (0.0, -0.6584775625905249902350),
    (5.0, -5.988035804917901258167),
    (100.0, -13.47158549818066548194),
];

pub const DRIFT_B: &[(f64, f64)] = &[
    (-40.0, 1066.466685406131472591),
    (-12.0, 95.33560179086329736978),
    (-5.0, 15.12855902114733575080),
    (-2.0, -0.4100283346258138748309),
    (-1.0, -3.551236809688341056440),
    (0.0, -6.039097986603089378007),
    (1.0, -8.255164809574995975568),
    (2.0, -10.66238497108842189497),
    (5.0, -23.09546960170825800104),
    (12.0, -99.25696803831745304196),
    (40.0, -1067.666011521403195693),
];

// (t, x, h(t,x))
pub const DRIFT_H: &[(f64, f64, f64)] = &[
    (1.0, 0.0, 6.039097986603089378007),
    (1.0, 1.0, 4.217903476355007723107),
    (1.0, -2.0, 13.32905163775508856164),
    (0.01, 5.0, 0.01599992320221171471130),
    (0.01, -5.0, 3333.413330645565478229),
    (2.0, 3.0, 4.004328599877401036462),
    (100.0, -40.0, 58.41675257317537292037),
    (0.5, -1.0, 8.965017437793863869414),
    (10.0, 20.0, 3.778447574203873272186),
];

pub const KAPPA: &[(f64, f64)] = &[
    (-20.0, -0.02499960941161432454814),
    (-5.0, -0.09990059302366656734349),
    (-3.3, -0.1509987069739791298967),
    (-1.0, -0.4594908359595539095031),
    (0.0, -1.371721164198448347272),
    (1.0, -5.671443077679639470812),
    (3.3, -44.30019129220954197319),
    (5.0, -100.4965614169554990897),
    (20.0, -1600.124986331968656859),
    (300.0, -360000.0083333330632716),
];

pub const P1: &[(f64, f64)] = &[
    (-10.0, 4.503485119894924667669e-97),
    (-6.0, 1.609046912630463206067e-21),
    (-2.0, 0.1115304380791210150341),
    (0.0, 0.2848676139753766863304),
    (1.0, 0.1129849469816915284282),
    (3.0, 0.01939199131560845451923),
    (8.0, 0.001892572150693588624598),
    (30.0, 0.00007007566156579838395364),
    (200.0, 6.107528058733996771259e-7),
];

pub const P1_PRIME: &[(f64, f64)] = &[
    (-10.0, 3.000073351977185003555e-95),
    (-6.0, 3.848349491723503942336e-20),
    (-2.0, 0.2713630868764749137244),
    (0.0, -0.2150429292508904290170),
    (1.0, -0.1129244760882040623555),
    (3.0, -0.01397081924039684460840),
    (8.0, -0.0005855184427667716566565),
    (30.0, -0.000005838503545893518242511),
    (200.0, -7.634405063344339775997e-9),
];

pub const THETA_NORMALIZER: f64 = 1.393104177248989454515;
pub const PI_MEAN: f64 = -1.857472236331985939353;
pub const NEG_AI0_SQ: f64 = -0.1260449190473708615369;

pub const PI_CDF: &[(f64, f64)] = &[
    (-6.0, 0.0007041112766655090142718),
    (-3.0, 0.2298253318226098521001),
    (-2.0, 0.4835368527860630774712),
    (-1.0, 0.7271938011109425787396),
    (0.0, 0.8865317556546427885900),
    (1.0, 0.9629878304854925045114),
    (2.0, 0.9908303501242648638626),
    (5.0, 0.9999888536008790998851),
];

pub const KOLMOGOROV_Q: &[(f64, f64)] = &[
    (0.4, 0.9971923267772982645947),
    (0.7, 0.7112351950296892486757),
    (1.0, 0.2699996716773545212049),
    (1.36, 0.04948587675537788363964),
    (2.0, 0.0006709252557796953465446),
    (3.0, 3.045995948942525687227e-8),
];
