#!/usr/bin/env python3
"""Write crates/core/data/fixture_catalog.json, the ten-restaurant desk catalog."""

import json
import math
import pathlib

ORIGIN = (41.8819, -87.6278)
R = 6371000.0

# id, name, distance m, bearing deg, tier, cuisines, attributes (kid, romantic, veg, formal)
PLACES = [
    ("r01", "Loop Burger Shack", 120, 10, 1, ["burgers", "american"], (0.4, 0.1, 0.2, 0.1)),
    ("r02", "Taqueria El Sol", 240, 50, 1, ["mexican"], (0.85, 0.2, 0.45, 0.15)),
    ("r03", "Trattoria Lucia", 330, 95, 3, ["italian"], (0.55, 0.9, 0.5, 0.7)),
    ("r04", "Golden Grill Steakhouse", 420, 140, 4, ["steakhouse", "american"], (0.2, 0.7, 0.1, 0.9)),
    ("r05", "Sakura Noodle Bar", 510, 185, 2, ["japanese", "ramen"], (0.5, 0.4, 0.35, 0.3)),
    ("r06", "Green Table", 640, 230, 3, ["vegetarian", "mediterranean"], (0.5, 0.6, 1.0, 0.8)),
    ("r07", "Family Pizza Kitchen", 760, 275, 1, ["pizza", "italian"], (0.95, 0.15, 0.5, 0.1)),
    ("r08", "Le Petit Jardin", 880, 320, 4, ["french"], (0.1, 0.95, 0.5, 0.95)),
    ("r09", "Spice Route", 990, 355, 2, ["indian"], (0.5, 0.4, 0.8, 0.4)),
    ("r10", "Harbor Fish House", 1100, 30, 3, ["seafood"], (0.4, 0.6, 0.2, 0.7)),
]

MENUS = {
    "r01": [("Classic cheeseburger", "Two smashed patties, cheddar, pickles", 9.5),
            ("Loaded fries", "Fries with cheese sauce and bacon", 6.0),
            ("Chicken sandwich", "Fried chicken thigh, slaw", 10.0),
            ("Chocolate shake", None, 5.5)],
    "r02": [("Al pastor tacos", "Three tacos with pineapple", 8.0),
            ("Bean and cheese burrito", None, 7.5),
            ("Elote", "Grilled corn, cotija, lime", 4.0),
            ("Horchata", None, 3.0)],
    "r03": [("Cacio e pepe", "Tonnarelli, pecorino, black pepper", 19.0),
            ("Osso buco", "Braised veal shank, saffron risotto", 34.0),
            ("Burrata", "Heirloom tomato, basil", 15.0),
            ("Tiramisu", None, 11.0)],
    "r04": [("Dry-aged ribeye", "16 oz, bone-in", 62.0),
            ("Filet mignon", "8 oz center cut", 54.0),
            ("Creamed spinach", None, 12.0),
            ("Wedge salad", "Blue cheese, bacon", 14.0)],
    "r05": [("Tonkotsu ramen", "Pork broth, chashu, egg", 15.0),
            ("Shoyu ramen", "Chicken and soy broth", 14.0),
            ("Vegetable gyoza", None, 8.0),
            ("Matcha ice cream", None, 5.0)],
    "r06": [("Roasted vegetable platter", "Seasonal vegetables, tahini", 21.0),
            ("Mushroom risotto", "Arborio, porcini, parmesan", 24.0),
            ("Falafel plate", "Hummus, pickled turnip, pita", 18.0),
            ("Lemon tart", None, 10.0)],
    "r07": [("Margherita pizza", "Tomato, mozzarella, basil", 12.0),
            ("Pepperoni pizza", None, 14.0),
            ("Kids pasta", "Butter noodles or marinara", 6.0),
            ("Garden salad", None, 7.0)],
    "r08": [("Duck confit", "Lentils, frisee", 42.0),
            ("Bouillabaisse", "Saffron broth, rouille", 48.0),
            ("Ratatouille tian", "Provencal vegetables", 32.0),
            ("Chocolate souffle", None, 16.0)],
    "r09": [("Chana masala", "Chickpeas, tomato, spices", 13.0),
            ("Paneer tikka", None, 15.0),
            ("Lamb vindaloo", "Hot", 18.0),
            ("Garlic naan", None, 3.5)],
    "r10": [("Grilled salmon", "Lemon butter, asparagus", 29.0),
            ("Fish and chips", "Beer-battered cod", 22.0),
            ("Oysters", "Half dozen, mignonette", 21.0),
            ("Clam chowder", None, 9.0)],
}

REVIEWS = {
    "r01": [
        "Perfect lunch spot, close to the office. The burger came out in five minutes. Fries were salty and a bit soggy. It gets crowded at noon. Good value for the price.",
        "The cheeseburger was delicious. Portions are small for the money though. Tables are sticky and the music is loud. Staff were friendly and quick.",
        "Greasy but satisfying. I would not bring a date here. The shake was amazing. Seating is limited to a few stools.",
        "Fast and cheap. The chicken sandwich was dry. They only had one veggie option. Cleanliness could be better.",
        "Perfect for a quick bite between meetings. Lines move fast. Nothing fancy about the room. The loaded fries are heavy.",
        "Came here twice this week. The pickles are homemade. Napkins ran out at the counter. The cashier was fantastic. Open late on Fridays.",
    ],
    "r02": [
        "Best tacos in the Loop, hands down. The al pastor is outstanding. Kids eat free on Sundays. Prices are very low. It is loud and busy.",
        "Our kids loved the churros. A fun, kid friendly place with crayons on every table. Salsa bar is fresh. Parking is impossible.",
        "Great cheap options for a big group. The burrito was huge. Not much ambience to speak of. The horchata was too sweet for me.",
        "Wonderful family spot. Staff treated our toddler like royalty. Bean burrito is a solid meatless choice. Service can be slow at dinner.",
        "Tacos were good. The room is small and bright. They close early on weekdays. Great for a casual bite.",
        "The elote was smoky and sweet. Lines can stretch out the door. They take cards now. Music was a little too loud. The staff remembered my order.",
    ],
    "r03": [
        "So romantic. Candlelight, soft music and a cozy corner table. The cacio e pepe was perfect. Service was attentive. It is pricey.",
        "Lovely spot for an anniversary dinner. The osso buco melted off the bone. Wine list is long. Desserts were excellent.",
        "Reservations are essential on weekends. The burrata was fresh. Pasta portions are modest. Our waiter recommended a fine Chianti.",
        "A charming trattoria with a romantic glow. Kids are welcome early in the evening. The tiramisu was heavenly. Noise level is low.",
        "Solid Italian. The bread was stale. Mains took a while to arrive. Still a nice date night option.",
        "Our server knew the menu inside out. The risotto was underseasoned. Tables are close together. The espresso at the end was excellent. Prices have crept up.",
    ],
    "r04": [
        "A good steak cooked perfectly, the ribeye was outstanding. The room is dark wood and leather. Prices are steep. Service was polished.",
        "A perfect traditional place for a business meeting. The booths are quiet and private. Our clients were impressed. The wedge salad was fine.",
        "Creamed spinach was delicious. Not much for vegetarians beyond sides. Wine pours are generous. It is expensive.",
        "Elegant and formal. Jackets are common at dinner. The filet was a little overcooked. Desserts are huge.",
        "Classic steakhouse experience. The bar makes a strong martini. Kids would be bored here. Valet parking costs extra.",
        "Came for a celebration dinner. The sides are meant for sharing. The sommelier picked a superb cabernet. Bills add up fast. Coat check is free.",
    ],
    "r05": [
        "A chill place with great ramen. The tonkotsu broth is rich and silky. Lines form around noon. Seating is tight.",
        "The shoyu ramen was amazing. Gyoza were crisp. Music is mellow. Prices are fair.",
        "Lovely light food, nothing too heavy. The matcha ice cream was delightful. Service is quick. The counter seats are cramped.",
        "Laid back spot with friendly cooks. The vegetable gyoza are tasty. Broth was a bit salty today. Good place to eat alone.",
        "Ramen came out lukewarm. They forgot our eggs. The room is plain. Maybe an off night.",
        "Noodles are made in house. The egg was perfectly jammy. There is usually a short wait. Broth sells out by nine. Cash tips are appreciated.",
    ],
    "r06": [
        "Wonderful fresh vegetables. The platter changes with the season. The room is calm and bright. Prices are on the high side.",
        "The mushroom risotto was creamy and rich. A huge vegetarian menu with vegan choices. Staff explained every dish. Tables are well spaced.",
        "Elegant room with soft lighting. It works well for a client lunch. The lemon tart was superb. Portions are modest.",
        "Falafel was crisp and the hummus silky. Kids might find it too quiet. The service was slow when it got busy. A nice place overall.",
        "We came for a birthday and everything was lovely. The tahini dressing was perfect. The wine list is short. Booking ahead is wise.",
        "The menu changes every month. Our server was knowledgeable. The flatbread was burnt on one side. Herbal tea selection is wonderful. It fills up on weekends.",
    ],
    "r07": [
        "A wonderful kid friendly place for families. The margherita was great. Crayons and balloons for the little ones. It is noisy.",
        "Generous portions, amazing value. Pizza was hot and cheesy. The salad was plain. Parking is easy.",
        "Our kids loved the butter noodles. Staff were patient with a messy table. The pepperoni was greasy. Prices are low.",
        "Not the place for a date night. It is loud with birthday parties. The crust is crisp. Service is fast.",
        "Classic neighborhood pizza. The garden salad is basic. High chairs available. A happy place on Sunday afternoons.",
        "Delivery took almost an hour. The pizza arrived lukewarm. Dine-in is a better experience. The tiramisu was surprisingly good. Staff are teenagers mostly.",
    ],
    "r08": [
        "Incredibly romantic. The garden terrace glows at night. The duck confit was superb. It is very expensive.",
        "The bouillabaisse was outstanding, the best in the city. Service was formal and flawless. The wine pairing was pricey. Dress code is enforced.",
        "A gorgeous room for a special evening. The chocolate souffle was heavenly. Portions are small. Reservations fill weeks ahead.",
        "The ratatouille tian was the only meatless main. The staff were courteous. Not a place for children. The bread basket is warm.",
        "Elegant French cuisine. The sommelier was helpful. Prices are steep. We will come back for our anniversary.",
        "The tasting menu has seven courses. Each plate looked like art. Service was a touch stiff. The cheese cart was fantastic. Expect to spend a lot.",
    ],
    "r09": [
        "The chana masala was delicious. Paneer tikka was smoky and tender. The dining room is casual. Spice levels are adjustable.",
        "Good vegetarian curries and fluffy naan. The lamb vindaloo is very hot. Service was friendly. Prices are reasonable.",
        "A cozy room with warm colors. The buffet at lunch is a bargain. They were out of mango lassi. A decent choice for groups.",
        "Excellent biryani. The dal was rich and comforting. It can be noisy at dinner. Takeout is quick.",
        "The samosas were cold. Our server forgot the raita. The curry was bland. We hope it improves.",
        "Lunch specials change daily. The mango lassi was delightful. Parking is in the back. The chef came out to greet us. Spice can be intense.",
    ],
    "r10": [
        "The grilled salmon was excellent. Harbor views from the window tables. Oysters were briny and fresh. It is pricey.",
        "Fish and chips were crisp and light. The chowder was fantastic. Service is steady. Good for a family dinner.",
        "A nice room for a date. The wine list leans white. Desserts were forgettable. Parking is tight.",
        "The oysters were amazing. The room gets loud on Fridays. Not many vegetarian choices. The staff were friendly.",
        "Long wait for a table. The cod was overcooked. The view is lovely. Prices have gone up.",
        "Fresh catch changes every day. The crab cakes were superb. The patio opens in summer. Service slowed down after eight. The lemon tart was tart.",
    ],
}


def destination(lat, lon, dist, bearing):
    p1, l1, th, d = map(math.radians, (lat, lon, bearing, 0))
    d = dist / R
    p2 = math.asin(math.sin(p1) * math.cos(d) + math.cos(p1) * math.sin(d) * math.cos(th))
    l2 = l1 + math.atan2(math.sin(th) * math.sin(d) * math.cos(p1), math.cos(d) - math.sin(p1) * math.sin(p2))
    return round(math.degrees(p2), 6), round(math.degrees(l2), 6)


def main():
    restaurants = []
    for rid, name, dist, bearing, tier, cuisines, (kid, rom, veg, formal) in PLACES:
        lat, lon = destination(*ORIGIN, dist, bearing)
        menu = []
        for item, desc, price in MENUS[rid]:
            m = {"name": item}
            if desc:
                m["description"] = desc
            m["price"] = price
            menu.append(m)
        photos = [
            {"kind": "food", "uri": f"fixture://{rid}/food-1.jpg", "caption": MENUS[rid][0][0]},
            {"kind": "food", "uri": f"fixture://{rid}/food-2.jpg", "caption": MENUS[rid][1][0]},
            {"kind": "ambience", "uri": f"fixture://{rid}/room-1.jpg", "caption": "Dining room"},
            {"kind": "ambience", "uri": f"fixture://{rid}/room-2.jpg"},
        ]
        reviews = [
            {"id": f"{rid}-v{i + 1}", "restaurant_id": rid, "text": text, "source": "synthetic",
             "rating": 5 - (i % 3)}
            for i, text in enumerate(REVIEWS[rid])
        ]
        restaurants.append({
            "id": rid, "name": name, "location": {"lat": lat, "lon": lon},
            "distance_m": float(dist), "price_tier": tier, "cuisines": cuisines,
            "menu": menu, "photos": photos, "reviews": reviews,
            "attributes": {"kid_friendly": kid, "romantic": rom,
                           "vegetarian_coverage": veg, "ambience_formality": formal},
        })
    doc = {"origin": {"lat": ORIGIN[0], "lon": ORIGIN[1]}, "currency": "USD", "restaurants": restaurants}
    out = pathlib.Path(__file__).resolve().parent.parent / "crates/core/data/fixture_catalog.json"
    out.write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
