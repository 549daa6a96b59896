public class LocationCardManager {
    public void removeLocation(Location location) {
        locationStore.remove(location);
    }
    public void displayLocation(Location location) {
        locationStore.display(location);
    }
}
