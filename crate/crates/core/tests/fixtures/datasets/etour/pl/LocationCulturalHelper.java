public class LocationCulturalHelper {
    public void searchLocation(Location location) {
        locationStore.search(location);
    }
    public void displayCultural(Cultural cultural) {
        culturalStore.display(cultural);
    }
    public void notifyCultural(Cultural cultural) {
        culturalStore.notify(cultural);
    }
    public void loadCultural(Cultural cultural) {
        culturalStore.load(cultural);
    }
}
